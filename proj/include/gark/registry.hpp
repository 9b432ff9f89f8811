#pragma once

// Name-based catalog of the method constructors, used by the CLI and the
// acceptance suite.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gark/methods.hpp"
#include "gark/tableau.hpp"

namespace gark {

class UnknownMethodError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Constructor parameters; unset values fall back to per-method defaults.
struct MethodParams {
  Index N = 2;
  std::optional<double> theta;
  std::optional<double> sigma;
  std::optional<double> mu;
  bool f0 = false;
  AssemblyMode mode = AssemblyMode::Adi;
  std::string base;
};

struct MethodEntry {
  std::string name;
  std::string parameters;
  std::string description;
};

struct BuiltMethod {
  std::string name;
  GarkTableau<double> tableau;
  std::optional<StructuredTableau<double>> structured;
  int documented_order = 0;
  std::string resolved_parameters;
};

const std::vector<MethodEntry>& method_catalog();

bool is_registered(const std::string& name);

BuiltMethod build_method(const std::string& name, const MethodParams& params = {});

/// Base Runge-Kutta methods for Strang and Yoshida: implicit-euler,
/// implicit-midpoint, gauss2, sdirk34.
RkTableau<double> base_method(const std::string& name);

std::vector<std::string> base_method_names();

AssemblyMode parse_mode(const std::string& mode);

}  // namespace gark
