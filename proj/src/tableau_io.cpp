#include "gark/tableau_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gark {

namespace {

using nlohmann::json;

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vector(std::ostringstream& os, const VectorXd& v) {
  os << '[';
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << number(v(i));
  os << ']';
}

void write_matrix(std::ostringstream& os, const MatrixXd& m) {
  os << '[';
  for (Index i = 0; i < m.rows(); ++i) {
    os << (i ? ", " : "") << '[';
    for (Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << number(m(i, j));
    os << ']';
  }
  os << ']';
}

VectorXd read_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + " must be an array");
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

MatrixXd read_matrix(const json& j, Index rows, Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw DimensionError(what + " must have " + std::to_string(rows) + " rows");
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw DimensionError(what + " must have " + std::to_string(cols) + " columns");
    for (Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

}  // namespace

std::string tableau_to_json(const GarkTableau<double>& t) {
  const Index P = t.num_partitions();
  auto label = [&](Index q) { return std::to_string(t.label(q)); };
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << json(t.name).dump() << ",\n";
  os << "  \"num_partitions\": " << P << ",\n";
  os << "  \"nonstiff_partition\": " << (t.has_nonstiff_partition() ? "true" : "false") << ",\n";
  os << "  \"stage_counts\": [";
  for (Index q = 0; q < P; ++q) os << (q ? ", " : "") << t.stage_count(q);
  os << "],\n  \"blocks\": {";
  for (Index q = 0; q < P; ++q)
    for (Index m = 0; m < P; ++m) {
      os << (q || m ? ",\n    " : "\n    ") << '"' << label(q) << ',' << label(m) << "\": ";
      write_matrix(os, t.block(q, m));
    }
  os << "\n  },\n  \"weights\": {";
  for (Index q = 0; q < P; ++q) {
    os << (q ? ",\n    " : "\n    ") << '"' << label(q) << "\": ";
    write_vector(os, t.weights(q));
  }
  os << "\n  },\n  \"stage_times\": {";
  for (Index q = 0; q < P; ++q) {
    os << (q ? ",\n    " : "\n    ") << '"' << label(q) << "\": ";
    write_vector(os, t.stage_times(q));
  }
  os << "\n  }\n}\n";
  return os.str();
}

GarkTableau<double> tableau_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid tableau JSON: ") + e.what());
  }
  try {
    const Index P = doc.at("num_partitions").get<Index>();
    if (P < 1) throw DimensionError("num_partitions must be >= 1");
    const bool nonstiff = doc.value("nonstiff_partition", false);
    const auto counts = doc.at("stage_counts").get<std::vector<Index>>();
    if (static_cast<Index>(counts.size()) != P)
      throw DimensionError("stage_counts must list every partition");
    auto label = [&](Index q) { return std::to_string(nonstiff ? q : q + 1); };

    std::vector<MatrixXd> blocks;
    for (Index q = 0; q < P; ++q)
      for (Index m = 0; m < P; ++m) {
        const std::string key = label(q) + "," + label(m);
        blocks.push_back(read_matrix(doc.at("blocks").at(key), counts[q], counts[m], "block " + key));
      }
    std::vector<VectorXd> weights, times;
    for (Index q = 0; q < P; ++q) weights.push_back(read_vector(doc.at("weights").at(label(q)), "weights"));
    if (doc.contains("stage_times"))
      for (Index q = 0; q < P; ++q)
        times.push_back(read_vector(doc.at("stage_times").at(label(q)), "stage_times"));

    GarkTableau<double> t(std::move(blocks), std::move(weights), nonstiff, std::move(times));
    t.name = doc.value("name", std::string("custom"));
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed tableau JSON: ") + e.what());
  }
}

GarkTableau<double> read_tableau_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tableau file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return tableau_from_json(ss.str());
}

void write_tableau_file(const GarkTableau<double>& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << tableau_to_json(t);
}

}  // namespace gark
