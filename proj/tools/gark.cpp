// Command-line front end: method catalog, order verification, stability
// scans and convergence studies.
//
// Exit codes: 0 success, 1 verification failed, 2 usage error, 3 numerical
// failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gark/convergence.hpp"
#include "gark/integrator.hpp"
#include "gark/order_conditions.hpp"
#include "gark/registry.hpp"
#include "gark/stability.hpp"
#include "gark/tableau_io.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct MethodOptions {
  std::string method;
  std::string tableau_file;
  std::string mode = "adi";
  std::string base;
  gark::Index N = 2;
  double theta = 0, sigma = 0, mu = 0;
  bool f0 = false;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* mu_opt = nullptr;
};

void add_method_options(CLI::App* app, MethodOptions& o, bool with_n = true) {
  auto* method = app->add_option("--method", o.method, "registered method name");
  auto* file = app->add_option("--tableau", o.tableau_file, "tableau JSON file instead of --method");
  method->excludes(file);
  app->add_option("--mode", o.mode, "structured assembly for adi-gark3/4")
      ->check(CLI::IsMember({"adi", "parallel"}));
  app->add_option("--base", o.base, "base RK method for strang/yoshida4")
      ->check(CLI::IsMember(gark::base_method_names()));
  if (with_n) app->add_option("--N", o.N, "number of stiff partitions")->check(CLI::PositiveNumber);
  o.theta_opt = app->add_option("--theta", o.theta, "theta parameter");
  o.sigma_opt = app->add_option("--sigma", o.sigma, "sigma parameter (mcs)");
  o.mu_opt = app->add_option("--mu", o.mu, "mu parameter (mcs, hv)");
  app->add_option("--f0", o.f0, "include the nonstiff partition (douglas)");
}

struct Resolved {
  gark::GarkTableau<double> tableau;
  std::optional<gark::StructuredTableau<double>> structured;
  std::optional<int> documented_order;
  std::string parameters;
};

Resolved resolve(const MethodOptions& o, std::optional<gark::Index> forced_n = std::nullopt) {
  if (!o.tableau_file.empty()) {
    Resolved r{gark::read_tableau_file(o.tableau_file), std::nullopt, std::nullopt, o.tableau_file};
    return r;
  }
  if (o.method.empty()) throw CLI::ValidationError("--method", "either --method or --tableau is required");
  gark::MethodParams p;
  p.N = forced_n.value_or(o.N);
  if (*o.theta_opt) p.theta = o.theta;
  if (*o.sigma_opt) p.sigma = o.sigma;
  if (*o.mu_opt) p.mu = o.mu;
  p.f0 = o.f0;
  p.mode = gark::parse_mode(o.mode);
  p.base = o.base;
  auto built = gark::build_method(o.method, p);
  return {std::move(built.tableau), std::move(built.structured), built.documented_order,
          built.resolved_parameters};
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

unsigned default_workers() {
  if (const char* env = std::getenv("GARK_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_list() {
  for (const auto& e : gark::method_catalog())
    std::cout << e.name << "\t" << e.parameters << "\t" << e.description << "\n";
  return kExitOk;
}

int cmd_verify(const MethodOptions& o, double tol, std::optional<int> expect) {
  const auto r = resolve(o);
  const auto res = gark::residuals_up_to(r.tableau, 4);
  std::cout << "order,condition,indices,target,residual\n";
  for (const auto& c : res) {
    std::string idx;
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      idx += (i ? " " : "") + std::to_string(c.indices[i]);
    std::cout << c.order << ',' << c.condition_id << ',' << idx << ',' << number(c.target) << ','
              << number(c.residual) << '\n';
  }
  if (r.structured) {
    const auto cr = gark::coupling_residuals_special(*r.structured, tol);
    for (std::size_t i = 0; i < cr.residual.size(); ++i)
      std::cout << "# coupling," << gark::CouplingResiduals<double>::labels[i] << ','
                << number(cr.residual[i]) << ',' << (cr.redundant[i] ? "redundant" : "independent")
                << '\n';
  }
  const int order = gark::classical_order(r.tableau, tol);
  const auto target = expect ? expect : r.documented_order;
  std::cout << "# order," << order;
  if (target) std::cout << ",documented," << *target;
  std::cout << '\n';
  return !target || order == *target ? kExitOk : kExitVerifyFailed;
}

int cmd_stability(const MethodOptions& o, double re_lo, double re_hi, double im_lo, double im_hi,
                  gark::Index res, const std::string& coupling, const std::string& out) {
  const auto r = resolve(o);
  gark::CouplingSpec spec;
  if (coupling != "equal") {
    if (coupling.rfind("axis:", 0) != 0)
      throw CLI::ValidationError("--coupling", "expected 'equal' or 'axis:<label>'");
    const int label = std::stoi(coupling.substr(5));
    spec.kind = gark::Coupling::Axis;
    spec.axis = r.tableau.has_nonstiff_partition() ? label : label - 1;
  }
  const auto samples = gark::scan_region<double>(r.tableau, {re_lo, re_hi}, {im_lo, im_hi}, res, res, spec);

  nlohmann::json header = {{"tableau", r.tableau.name},
                           {"parameters", r.parameters},
                           {"coupling", coupling},
                           {"resolution", res}};
  std::ostringstream csv;
  csv << "re,im,abs_R\n";
  std::size_t axis = spec.kind == gark::Coupling::Axis ? static_cast<std::size_t>(spec.axis) : 0;
  for (const auto& s : samples)
    csv << number(s.z[axis].real()) << ',' << number(s.z[axis].imag()) << ','
        << number(std::abs(s.value)) << '\n';
  if (out.empty()) {
    std::cout << "# " << header.dump() << '\n' << csv.str();
  } else {
    write_text(out + ".csv", csv.str());
    write_text(out + ".json", header.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_converge(const MethodOptions& o, const std::string& problem, gark::Index np,
                 std::vector<gark::Index> steps, unsigned workers, bool parallel_stages,
                 const std::string& out) {
  const gark::Index d = gark::problem_dimension(problem);
  auto r = resolve(o, d);
  if (steps.empty()) steps = gark::default_steps(problem);
  gark::StepperConfig<double> cfg;
  cfg.parallel_stages = parallel_stages;
  auto record = gark::run_convergence(r.tableau, problem, np, steps, workers, cfg);
  record.parameters = r.parameters;
  if (out.empty()) {
    std::cout << gark::convergence_csv(record);
  } else {
    write_text(out + ".csv", gark::convergence_csv(record));
    write_text(out + ".json", gark::convergence_json(record));
    std::cout << "fitted_order " << number(record.fitted_order) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GARK splitting methods: catalog, order conditions, stability, convergence"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list registered methods");

  MethodOptions verify_opts;
  double tol = gark::kDefaultOrderTolerance;
  int expect_order = 0;
  auto* verify = app.add_subcommand("verify", "evaluate order-condition residuals");
  add_method_options(verify, verify_opts);
  verify->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
  auto* expect_opt = verify->add_option("--expect-order", expect_order, "order required for exit 0");

  MethodOptions stab_opts;
  double re_lo = -15, re_hi = 15, im_lo = -15, im_hi = 15;
  gark::Index resolution = 301;
  std::string coupling = "equal", stab_out;
  auto* stability = app.add_subcommand("stability", "scan |R(z)| on a grid");
  add_method_options(stability, stab_opts);
  stability->add_option("--re-min", re_lo);
  stability->add_option("--re-max", re_hi);
  stability->add_option("--im-min", im_lo);
  stability->add_option("--im-max", im_hi);
  stability->add_option("--resolution", resolution, "samples per axis")->check(CLI::Range(2, 100000));
  stability->add_option("--coupling", coupling, "equal | axis:<partition label>");
  stability->add_option("--out", stab_out, "write <out>.csv and <out>.json");

  MethodOptions conv_opts;
  std::string problem = "heat2d", conv_out;
  gark::Index np = 16;
  std::vector<gark::Index> steps;
  unsigned workers = default_workers();
  bool parallel_stages = false;
  auto* converge = app.add_subcommand("converge", "temporal convergence study on a heat problem");
  add_method_options(converge, conv_opts, false);
  converge->add_option("--problem", problem)->check(CLI::IsMember({"heat2d", "heat3d"}));
  converge->add_option("--np", np, "grid points per direction")->check(CLI::Range(2, 4096));
  converge->add_option("--steps", steps, "step counts")->delimiter(',');
  converge->add_option("--workers", workers, "concurrent runs (default $GARK_WORKERS)")
      ->check(CLI::PositiveNumber);
  converge->add_flag("--parallel-stages", parallel_stages, "solve independent stages concurrently");
  converge->add_option("--out", conv_out, "write <out>.csv and <out>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list) return cmd_list();
    if (*verify)
      return cmd_verify(verify_opts, tol, *expect_opt ? std::optional<int>(expect_order) : std::nullopt);
    if (*stability)
      return cmd_stability(stab_opts, re_lo, re_hi, im_lo, im_hi, resolution, coupling, stab_out);
    if (*converge)
      return cmd_converge(conv_opts, problem, np, steps, workers, parallel_stages, conv_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gark::SingularMatrixError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const gark::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
