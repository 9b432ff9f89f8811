#pragma once

// Temporal convergence studies on the heat problems over t ∈ [0, 1].

#include <string>
#include <vector>

#include "gark/integrator.hpp"
#include "gark/tableau.hpp"

namespace gark {

struct ConvergenceRun {
  Index steps = 0;
  double error = 0;      ///< normalized ℓ² error at t = 1
  double error_raw = 0;  ///< unnormalized 2-norm
  double wall_seconds = 0;
  Index newton_iterations = 0;
};

struct ConvergenceRecord {
  std::string method;
  std::string parameters;
  std::string problem;
  Index np = 0;
  std::vector<ConvergenceRun> runs;
  double fitted_order = 0;
};

/// Default step counts for a problem ("heat2d" or "heat3d").
std::vector<Index> default_steps(const std::string& problem);

/// Spatial dimension of a named heat problem.
Index problem_dimension(const std::string& problem);

/// Integrates `problem` with each step count, up to `workers` runs at a time.
ConvergenceRecord run_convergence(const GarkTableau<double>& tableau, const std::string& problem,
                                  Index np, const std::vector<Index>& steps, unsigned workers = 1,
                                  const StepperConfig<double>& cfg = {});

/// CSV with header "steps,error,error_raw" followed by a "# fitted_order" line.
std::string convergence_csv(const ConvergenceRecord& record);

std::string convergence_json(const ConvergenceRecord& record);

}  // namespace gark
