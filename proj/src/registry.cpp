#include "gark/registry.hpp"

#include <cmath>
#include <sstream>

namespace gark {

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

BuiltMethod from_structured(std::string name, StructuredTableau<double> st, int order,
                            std::string params) {
  BuiltMethod m;
  m.name = std::move(name);
  m.tableau = assemble_structured(st);
  m.tableau.name = m.name;
  m.structured = std::move(st);
  m.documented_order = order;
  m.resolved_parameters = std::move(params);
  return m;
}

BuiltMethod from_gark(std::string name, GarkTableau<double> t, int order, std::string params) {
  BuiltMethod m;
  m.name = std::move(name);
  m.tableau = std::move(t);
  m.tableau.name = m.name;
  m.documented_order = order;
  m.resolved_parameters = std::move(params);
  return m;
}

int strang_order(const std::string& base) { return base == "implicit-euler" ? 1 : 2; }

int yoshida_order(const std::string& base) {
  if (base == "implicit-euler") return 1;
  if (base == "implicit-midpoint") return 2;
  return 4;
}

}  // namespace

const std::vector<MethodEntry>& method_catalog() {
  static const std::vector<MethodEntry> catalog = {
      {"lod-be", "N", "LOD backward Euler, one implicit Euler solve per partition"},
      {"yanenko", "N", "Yanenko LOD Crank-Nicolson, one trapezoidal sweep"},
      {"yanenko-sym", "N", "symmetric Yanenko, forward then reversed half-step sweeps"},
      {"yanenko-par", "N", "parallel Yanenko, averaged forward and reversed sweeps"},
      {"trapezoidal", "N", "trapezoidal splitting, explicit then implicit half steps"},
      {"douglas", "N, theta=0.5, f0=false", "Douglas stabilizing-correction scheme"},
      {"douglas-mod-first", "N, theta=0.5",
       "Douglas scheme with an initial stabilizing correction for f0"},
      {"douglas-mod-last", "N, theta=0.5",
       "Douglas scheme with a final stabilizing correction for f0"},
      {"mcs", "N, theta=0.5, sigma=theta, mu=1/2-theta", "modified Craig-Sneyd scheme"},
      {"hv", "N, theta=1-1/sqrt(2), mu=0.5", "Hundsdorfer-Verwer scheme"},
      {"strang", "N, base=implicit-midpoint", "Strang operator splitting over a base RK method"},
      {"yoshida4", "base=sdirk34 (N=2 only)", "Yoshida fourth order triple-jump splitting"},
      {"adi-gark3", "N, mode=adi|parallel", "four-stage third order ADI-GARK method"},
      {"adi-gark4", "N, mode=adi|parallel", "six-stage fourth order ADI-GARK method"},
  };
  return catalog;
}

bool is_registered(const std::string& name) {
  for (const auto& e : method_catalog())
    if (e.name == name) return true;
  return false;
}

std::vector<std::string> base_method_names() {
  return {"implicit-euler", "implicit-midpoint", "gauss2", "sdirk34"};
}

RkTableau<double> base_method(const std::string& name) {
  if (name == "implicit-euler") return implicit_euler<double>();
  if (name == "implicit-midpoint") return implicit_midpoint<double>();
  if (name == "gauss2") return gauss2<double>();
  if (name == "sdirk34") return sdirk34<double>();
  throw UnknownMethodError("unknown base method '" + name + "'");
}

AssemblyMode parse_mode(const std::string& mode) {
  if (mode == "adi") return AssemblyMode::Adi;
  if (mode == "parallel") return AssemblyMode::ParallelAdi;
  throw std::invalid_argument("mode must be 'adi' or 'parallel', got '" + mode + "'");
}

BuiltMethod build_method(const std::string& name, const MethodParams& p) {
  const Index N = p.N;
  const std::string n_str = "N=" + std::to_string(N);

  if (name == "lod-be") return from_structured(name, lod_backward_euler<double>(N), 1, n_str);
  if (name == "yanenko") return from_gark(name, yanenko_lod_cn<double>(N), N == 1 ? 2 : 1, n_str);
  if (name == "yanenko-sym") return from_gark(name, yanenko_symmetric<double>(N), 2, n_str);
  if (name == "yanenko-par") return from_gark(name, yanenko_parallel<double>(N), 2, n_str);
  if (name == "trapezoidal") return from_gark(name, trapezoidal_splitting<double>(N), 2, n_str);

  if (name == "douglas") {
    const double theta = p.theta.value_or(0.5);
    const int order = near(theta, 0.5) && !p.f0 ? 2 : 1;
    return from_structured(name, douglas<double>(N, theta, p.f0), order,
                           n_str + " theta=" + fmt(theta) + " f0=" + (p.f0 ? "true" : "false"));
  }
  if (name == "douglas-mod-first" || name == "douglas-mod-last") {
    const double theta = p.theta.value_or(0.5);
    auto st = name == "douglas-mod-first" ? douglas_modified_first<double>(N, theta)
                                          : douglas_modified_last<double>(N, theta);
    return from_structured(name, std::move(st), near(theta, 0.5) ? 2 : 1,
                           n_str + " theta=" + fmt(theta));
  }
  if (name == "mcs") {
    const double theta = p.theta.value_or(0.5);
    const double sigma = p.sigma.value_or(theta);
    const double mu = p.mu.value_or(0.5 - theta);
    const int order = near(sigma, theta) && near(mu, 0.5 - theta) ? 2 : 1;
    return from_structured(name, modified_craig_sneyd<double>(N, theta, sigma, mu), order,
                           n_str + " theta=" + fmt(theta) + " sigma=" + fmt(sigma) + " mu=" + fmt(mu));
  }
  if (name == "hv") {
    const double theta = p.theta.value_or(1.0 - 1.0 / std::sqrt(2.0));
    const double mu = p.mu.value_or(0.5);
    return from_structured(name, hundsdorfer_verwer<double>(N, theta, mu), near(mu, 0.5) ? 2 : 1,
                           n_str + " theta=" + fmt(theta) + " mu=" + fmt(mu));
  }
  if (name == "strang") {
    const std::string base = p.base.empty() ? "implicit-midpoint" : p.base;
    return from_gark(name, strang(base_method(base), N), strang_order(base),
                     n_str + " base=" + base);
  }
  if (name == "yoshida4") {
    const std::string base = p.base.empty() ? "sdirk34" : p.base;
    return from_gark(name, yoshida4(base_method(base), N), yoshida_order(base),
                     n_str + " base=" + base);
  }
  if (name == "adi-gark3" || name == "adi-gark4") {
    auto st = name == "adi-gark3" ? adi_gark3<double>(p.mode, N) : adi_gark4<double>(p.mode, N);
    return from_structured(name, std::move(st), name == "adi-gark3" ? 3 : 4,
                           n_str + " mode=" + to_string(p.mode));
  }
  throw UnknownMethodError("unknown method '" + name + "'");
}

}  // namespace gark
