#include "gark/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>

#include "gark/problems.hpp"
#include "json.hpp"

namespace gark {

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ConvergenceRun single_run(const GarkTableau<double>& tableau, const HeatProblem<double>& problem,
                          Index steps, const StepperConfig<double>& cfg) {
  const auto ode = problem.ode();
  const auto start = std::chrono::steady_clock::now();
  const auto result = integrate(tableau, ode, 0.0, 1.0, problem.exact_grid(0.0), steps, cfg);
  const auto stop = std::chrono::steady_clock::now();

  ConvergenceRun run;
  run.steps = steps;
  const auto norms = error_norms(result.y, problem, 1.0);
  run.error = norms.normalized;
  run.error_raw = norms.raw;
  run.wall_seconds = std::chrono::duration<double>(stop - start).count();
  for (const auto& d : result.steps) run.newton_iterations += d.newton_iterations;
  return run;
}

}  // namespace

std::vector<Index> default_steps(const std::string& problem) {
  if (problem == "heat2d") return {16, 32, 64, 128, 256};
  if (problem == "heat3d") return {16, 32, 64};
  throw std::invalid_argument("unknown problem '" + problem + "'");
}

Index problem_dimension(const std::string& problem) {
  if (problem == "heat2d") return 2;
  if (problem == "heat3d") return 3;
  throw std::invalid_argument("unknown problem '" + problem + "'");
}

ConvergenceRecord run_convergence(const GarkTableau<double>& tableau, const std::string& problem,
                                  Index np, const std::vector<Index>& steps, unsigned workers,
                                  const StepperConfig<double>& cfg) {
  const Index d = problem_dimension(problem);
  if (steps.size() < 2) throw std::invalid_argument("a convergence study needs at least two step counts");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] < 1) throw std::invalid_argument("step counts must be positive");
    if (i > 0 && steps[i] <= steps[i - 1])
      throw std::invalid_argument("step counts must be strictly increasing");
  }
  const HeatProblem<double> heat(d, np);

  ConvergenceRecord record;
  record.method = tableau.name;
  record.problem = problem;
  record.np = np;
  record.runs.resize(steps.size());
  const std::size_t batch = std::max(1u, workers);
  for (std::size_t first = 0; first < steps.size(); first += batch) {
    const std::size_t last = std::min(steps.size(), first + batch);
    if (last - first == 1) {
      record.runs[first] = single_run(tableau, heat, steps[first], cfg);
      continue;
    }
    std::vector<std::future<ConvergenceRun>> tasks;
    for (std::size_t i = first; i < last; ++i)
      tasks.push_back(std::async(std::launch::async, single_run, std::cref(tableau), std::cref(heat),
                                 steps[i], std::cref(cfg)));
    for (std::size_t i = first; i < last; ++i) record.runs[i] = tasks[i - first].get();
  }

  std::vector<double> errors;
  for (const auto& r : record.runs) errors.push_back(r.error);
  record.fitted_order = fit_order<double>(steps, errors);
  return record;
}

std::string convergence_csv(const ConvergenceRecord& record) {
  std::ostringstream os;
  os << "steps,error,error_raw\n";
  for (const auto& r : record.runs)
    os << r.steps << ',' << number(r.error) << ',' << number(r.error_raw) << '\n';
  os << "# fitted_order," << number(record.fitted_order) << '\n';
  return os.str();
}

std::string convergence_json(const ConvergenceRecord& record) {
  nlohmann::json doc;
  doc["method"] = record.method;
  doc["parameters"] = record.parameters;
  doc["problem"] = record.problem;
  doc["np"] = record.np;
  doc["fitted_order"] = record.fitted_order;
  doc["runs"] = nlohmann::json::array();
  for (const auto& r : record.runs)
    doc["runs"].push_back({{"steps", r.steps},
                           {"error", r.error},
                           {"error_raw", r.error_raw},
                           {"wall_seconds", r.wall_seconds},
                           {"newton_iterations", r.newton_iterations}});
  return doc.dump(2) + "\n";
}

}  // namespace gark
