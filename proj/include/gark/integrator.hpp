#pragma once

// Fixed-step integration of additively partitioned ODEs with IMIM-GARK
// tableaus. Stages run in a lower-triangularizing order; each implicit
// stage is a solve in a single partition, either a Newton iteration or one
// shifted linear solve when the partition is linear.

#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gark/tableau.hpp"

namespace gark {

/// Raised when a Newton iteration does not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver for (I − alpha L) x = r with alpha and L fixed.
template <typename Scalar>
class ShiftedSolver {
 public:
  virtual ~ShiftedSolver() = default;
  virtual Vector<Scalar> solve(const Vector<Scalar>& rhs) const = 0;
};

template <typename Scalar>
class DenseShiftedSolver : public ShiftedSolver<Scalar> {
 public:
  explicit DenseShiftedSolver(const Matrix<Scalar>& m) : lu_(m) {
    if (!lu_.isInvertible()) throw SingularMatrixError("stage matrix is singular");
  }
  Vector<Scalar> solve(const Vector<Scalar>& rhs) const override { return lu_.solve(rhs); }

 private:
  Eigen::FullPivLU<Matrix<Scalar>> lu_;
};

/// Linear right-hand side f(t, y) = L(t) y + φ(t).
template <typename Scalar>
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index dimension() const = 0;
  virtual Vector<Scalar> apply(Scalar t, const Vector<Scalar>& y) const = 0;
  virtual Vector<Scalar> source(Scalar t) const = 0;
  virtual Matrix<Scalar> dense(Scalar t) const = 0;
  virtual bool time_independent() const { return true; }

  /// Factorization of I − alpha L(t). The default goes through dense().
  virtual std::shared_ptr<const ShiftedSolver<Scalar>> factor(Scalar t, Scalar alpha) const {
    return dense_factor(t, alpha);
  }

  std::shared_ptr<const ShiftedSolver<Scalar>> dense_factor(Scalar t, Scalar alpha) const {
    const Index n = dimension();
    return std::make_shared<DenseShiftedSolver<Scalar>>(Matrix<Scalar>::Identity(n, n) -
                                                        alpha * dense(t));
  }
};

/// Constant matrix operator with a constant or time-dependent source.
template <typename Scalar>
class DenseLinearOperator : public LinearOperator<Scalar> {
 public:
  using SourceFn = std::function<Vector<Scalar>(Scalar)>;

  explicit DenseLinearOperator(Matrix<Scalar> L, SourceFn source = {})
      : L_(std::move(L)), source_(std::move(source)) {
    if (L_.rows() != L_.cols()) throw DimensionError("linear operator must be square");
  }

  Index dimension() const override { return L_.rows(); }
  Vector<Scalar> apply(Scalar, const Vector<Scalar>& y) const override { return L_ * y; }
  Vector<Scalar> source(Scalar t) const override {
    return source_ ? source_(t) : Vector<Scalar>::Zero(L_.rows());
  }
  Matrix<Scalar> dense(Scalar) const override { return L_; }

 private:
  Matrix<Scalar> L_;
  SourceFn source_;
};

/// One additive term of the right-hand side. Either `linear` is set, or `f`
/// (with `jacobian` when the term is solved implicitly).
template <typename Scalar>
struct Partition {
  using Rhs = std::function<Vector<Scalar>(Scalar, const Vector<Scalar>&)>;
  using Jacobian = std::function<Matrix<Scalar>(Scalar, const Vector<Scalar>&)>;

  Rhs f;
  Jacobian jacobian;
  std::shared_ptr<const LinearOperator<Scalar>> linear;

  static Partition from_linear(std::shared_ptr<const LinearOperator<Scalar>> op) {
    Partition p;
    p.linear = std::move(op);
    return p;
  }

  bool is_linear() const { return static_cast<bool>(linear); }

  Vector<Scalar> operator()(Scalar t, const Vector<Scalar>& y) const {
    if (linear) return linear->apply(t, y) + linear->source(t);
    return f(t, y);
  }
};

/// y' = g(t, y) + Σ_m f^{(m)}(t, y). `nonstiff` is g and pairs with
/// partition 0 of a tableau that has one; when absent it is taken as zero.
template <typename Scalar>
struct PartitionedOde {
  Index dimension = 0;
  std::vector<Partition<Scalar>> partitions;
  std::optional<Partition<Scalar>> nonstiff;
  std::function<Vector<Scalar>(Scalar)> exact;

  Vector<Scalar> rhs(Scalar t, const Vector<Scalar>& y) const {
    Vector<Scalar> out = Vector<Scalar>::Zero(dimension);
    for (const auto& p : partitions) out += p(t, y);
    if (nonstiff) out += (*nonstiff)(t, y);
    return out;
  }
};

enum class LinearSolverKind {
  Native,  ///< the operator's own factorization (line solves for the heat operators)
  Dense,   ///< LU of the assembled dense stage matrix
};

template <typename Scalar>
struct StepperConfig {
  Scalar newton_tol = Scalar(1e-12);
  int newton_max_iters = 50;
  LinearSolverKind linear_solver = LinearSolverKind::Native;
  bool parallel_stages = false;

  void validate() const {
    if (!(newton_tol > Scalar(0))) throw std::invalid_argument("newton_tol must be positive");
    if (newton_max_iters < 1) throw std::invalid_argument("newton_max_iters must be >= 1");
  }
};

struct StepDiagnostics {
  Index newton_iterations = 0;
  Index implicit_stages = 0;
  Index linear_solves = 0;
};

template <typename Scalar>
struct IntegrationResult {
  Vector<Scalar> y;
  std::vector<StepDiagnostics> steps;
};

/// Reusable stepper for one tableau and one ODE. Factorizations of
/// I − h a L for time-independent linear partitions are cached per
/// (partition, h a) across stages and steps.
template <typename Scalar>
class Stepper {
 public:
  Stepper(GarkTableau<Scalar> tableau, const PartitionedOde<Scalar>& ode,
          StepperConfig<Scalar> cfg = {}, std::optional<StagePermutation> order = std::nullopt)
      : tab_(std::move(tableau)), ode_(&ode), cfg_(cfg) {
    cfg_.validate();
    bind_partitions();
    if (!order) order = find_imim_permutation(tab_);
    if (!order) throw std::invalid_argument("tableau '" + tab_.name + "' has no IMIM stage order");
    prepare(*order);
  }

  const GarkTableau<Scalar>& tableau() const { return tab_; }
  const std::vector<Index>& stage_order() const { return order_; }

  Vector<Scalar> step(Scalar t, const Vector<Scalar>& y, Scalar h,
                      StepDiagnostics* diagnostics = nullptr) {
    if (h == Scalar(0)) throw std::invalid_argument("step size must be nonzero");
    if (y.size() != ode_->dimension) throw DimensionError("state length does not match the ODE");
    const Index s = tab_.total_stages();
    std::vector<Vector<Scalar>> Y(s), F(s);
    std::vector<StepDiagnostics> stage_diag(s);

    if (cfg_.parallel_stages) {
      for (const auto& level : levels_) {
        if (level.size() == 1) {
          run_stage(level[0], t, y, h, Y, F, stage_diag[level[0]]);
          continue;
        }
        std::vector<std::future<void>> tasks;
        tasks.reserve(level.size());
        for (Index g : level)
          tasks.push_back(std::async(std::launch::async, [&, g] {
            run_stage(g, t, y, h, Y, F, stage_diag[g]);
          }));
        for (auto& task : tasks) task.get();
      }
    } else {
      for (Index g : order_) run_stage(g, t, y, h, Y, F, stage_diag[g]);
    }

    Vector<Scalar> out = y;
    for (const auto& [g, w] : weights_) out += (h * w) * F[g];
    if (diagnostics) {
      *diagnostics = {};
      for (const auto& d : stage_diag) {
        diagnostics->newton_iterations += d.newton_iterations;
        diagnostics->implicit_stages += d.implicit_stages;
        diagnostics->linear_solves += d.linear_solves;
      }
    }
    return out;
  }

 private:
  struct StageInfo {
    Index partition = 0;
    Scalar time_fraction{};
    Scalar diagonal{};
    std::vector<std::pair<Index, Scalar>> deps;
  };

  void bind_partitions() {
    const Index N = tab_.num_stiff_partitions();
    if (static_cast<Index>(ode_->partitions.size()) != N)
      throw DimensionError("ODE has " + std::to_string(ode_->partitions.size()) +
                           " stiff partitions, tableau has " + std::to_string(N));
    if (ode_->nonstiff && !tab_.has_nonstiff_partition())
      throw std::invalid_argument("ODE has a nonstiff term but the tableau has no partition 0");
    terms_.clear();
    if (tab_.has_nonstiff_partition()) terms_.push_back(ode_->nonstiff ? &*ode_->nonstiff : nullptr);
    for (const auto& p : ode_->partitions) terms_.push_back(&p);
  }

  void prepare(const StagePermutation& order) {
    order_ = to_indices(tab_, order);
    const auto flat = tab_.flatten();
    const auto permuted = permute(flat, std::span<const Index>(order_));
    const Scalar thr = detail::zero_threshold(flat.A);
    if (!is_lower_triangular(permuted.A, thr))
      throw std::invalid_argument("stage order does not lower-triangularize the tableau");

    const Index s = tab_.total_stages();
    const auto times = tab_.flat_stage_times();
    stages_.assign(s, {});
    for (Index g = 0; g < s; ++g) {
      auto& st = stages_[g];
      st.partition = tab_.stage_at(g).partition;
      st.time_fraction = times(g);
      st.diagonal = std::abs(flat.A(g, g)) > thr ? flat.A(g, g) : Scalar(0);
      for (Index k = 0; k < s; ++k)
        if (k != g && std::abs(flat.A(g, k)) > thr) st.deps.emplace_back(k, flat.A(g, k));
    }
    weights_.clear();
    for (Index g = 0; g < s; ++g)
      if (flat.b(g) != Scalar(0)) weights_.emplace_back(g, flat.b(g));

    std::vector<Index> level(s, 0);
    Index max_level = 0;
    for (Index g : order_) {
      for (const auto& dep : stages_[g].deps) level[g] = std::max(level[g], level[dep.first] + 1);
      max_level = std::max(max_level, level[g]);
    }
    levels_.assign(max_level + 1, {});
    for (Index g : order_) levels_[level[g]].push_back(g);
  }

  std::shared_ptr<const ShiftedSolver<Scalar>> shifted_solver(Index partition,
                                                              const LinearOperator<Scalar>& op,
                                                              Scalar t, Scalar alpha) {
    auto make = [&]() {
      return cfg_.linear_solver == LinearSolverKind::Dense ? op.dense_factor(t, alpha)
                                                           : op.factor(t, alpha);
    };
    if (!op.time_independent()) return make();
    const std::lock_guard<std::mutex> lock(cache_mutex_);
    auto& slot = cache_[{partition, alpha}];
    if (!slot) slot = make();
    return slot;
  }

  void run_stage(Index g, Scalar t, const Vector<Scalar>& y, Scalar h,
                 std::vector<Vector<Scalar>>& Y, std::vector<Vector<Scalar>>& F,
                 StepDiagnostics& diag) {
    const auto& st = stages_[g];
    Vector<Scalar> rhs = y;
    for (const auto& [k, a] : st.deps) {
      if (F[k].size() == 0) throw std::logic_error("stage evaluated before its dependency");
      rhs += (h * a) * F[k];
    }
    const Scalar T = t + st.time_fraction * h;
    const Partition<Scalar>* term = terms_[st.partition];

    if (term == nullptr) {
      Y[g] = std::move(rhs);
      F[g] = Vector<Scalar>::Zero(y.size());
      return;
    }
    if (st.diagonal == Scalar(0)) {
      Y[g] = std::move(rhs);
    } else {
      ++diag.implicit_stages;
      const Scalar alpha = h * st.diagonal;
      if (term->is_linear()) {
        const auto solver = shifted_solver(st.partition, *term->linear, T, alpha);
        Y[g] = solver->solve(rhs + alpha * term->linear->source(T));
        ++diag.linear_solves;
      } else {
        Y[g] = newton_solve(*term, T, alpha, rhs, diag);
      }
    }
    F[g] = (*term)(T, Y[g]);
  }

  // Solves Y − alpha f(T, Y) = rhs.
  Vector<Scalar> newton_solve(const Partition<Scalar>& term, Scalar T, Scalar alpha,
                              const Vector<Scalar>& rhs, StepDiagnostics& diag) const {
    if (!term.jacobian) throw std::invalid_argument("implicit nonlinear stage needs a Jacobian");
    const Index n = rhs.size();
    Vector<Scalar> Y = rhs;
    for (int it = 0; it <= cfg_.newton_max_iters; ++it) {
      const Vector<Scalar> R = Y - alpha * term.f(T, Y) - rhs;
      const Scalar scale = Scalar(1) + Y.cwiseAbs().maxCoeff();
      if (R.cwiseAbs().maxCoeff() <= cfg_.newton_tol * scale) return Y;
      if (it == cfg_.newton_max_iters) break;
      const Matrix<Scalar> J = Matrix<Scalar>::Identity(n, n) - alpha * term.jacobian(T, Y);
      Eigen::FullPivLU<Matrix<Scalar>> lu(J);
      if (!lu.isInvertible()) throw SingularMatrixError("Newton matrix is singular");
      Y -= lu.solve(R);
      ++diag.newton_iterations;
    }
    throw ConvergenceError("Newton iteration did not converge in " +
                           std::to_string(cfg_.newton_max_iters) + " iterations");
  }

  GarkTableau<Scalar> tab_;
  const PartitionedOde<Scalar>* ode_;
  StepperConfig<Scalar> cfg_;
  std::vector<const Partition<Scalar>*> terms_;
  std::vector<Index> order_;
  std::vector<StageInfo> stages_;
  std::vector<std::pair<Index, Scalar>> weights_;
  std::vector<std::vector<Index>> levels_;
  std::mutex cache_mutex_;
  std::map<std::pair<Index, Scalar>, std::shared_ptr<const ShiftedSolver<Scalar>>> cache_;
};

template <typename Scalar>
Vector<Scalar> step(const GarkTableau<Scalar>& tableau, const PartitionedOde<Scalar>& ode, Scalar t,
                    const Vector<Scalar>& y, Scalar h, StepperConfig<Scalar> cfg = {},
                    std::optional<StagePermutation> order = std::nullopt) {
  Stepper<Scalar> stepper(tableau, ode, cfg, std::move(order));
  return stepper.step(t, y, h);
}

template <typename Scalar>
IntegrationResult<Scalar> integrate(const GarkTableau<Scalar>& tableau,
                                    const PartitionedOde<Scalar>& ode, Scalar t0, Scalar t_end,
                                    const Vector<Scalar>& y0, Index n_steps,
                                    StepperConfig<Scalar> cfg = {}) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  Stepper<Scalar> stepper(tableau, ode, cfg);
  const Scalar h = (t_end - t0) / Scalar(n_steps);
  IntegrationResult<Scalar> result{y0, {}};
  result.steps.resize(static_cast<std::size_t>(n_steps));
  for (Index k = 0; k < n_steps; ++k)
    result.y = stepper.step(t0 + Scalar(k) * h, result.y, h, &result.steps[k]);
  return result;
}

/// One step computed by solving the full coupled stage system
/// (I − h Σ A ⊗ L) Y = 1 ⊗ y + h A φ at once. Every term must be linear.
template <typename Scalar>
Vector<Scalar> dense_staged_oracle_step(const GarkTableau<Scalar>& tableau,
                                        const PartitionedOde<Scalar>& ode, Scalar t,
                                        const Vector<Scalar>& y, Scalar h) {
  const Index N = tableau.num_stiff_partitions();
  if (static_cast<Index>(ode.partitions.size()) != N)
    throw DimensionError("ODE and tableau partition counts differ");
  if (ode.nonstiff && !tableau.has_nonstiff_partition())
    throw std::invalid_argument("ODE has a nonstiff term but the tableau has no partition 0");
  std::vector<const LinearOperator<Scalar>*> ops;
  if (tableau.has_nonstiff_partition()) {
    if (ode.nonstiff && !ode.nonstiff->is_linear())
      throw std::invalid_argument("oracle needs linear partitions");
    ops.push_back(ode.nonstiff ? ode.nonstiff->linear.get() : nullptr);
  }
  for (const auto& p : ode.partitions) {
    if (!p.is_linear()) throw std::invalid_argument("oracle needs linear partitions");
    ops.push_back(p.linear.get());
  }

  const Index n = ode.dimension;
  const Index s = tableau.total_stages();
  const auto flat = tableau.flatten();
  const auto times = tableau.flat_stage_times();

  std::vector<Matrix<Scalar>> L(s);
  std::vector<Vector<Scalar>> phi(s);
  for (Index k = 0; k < s; ++k) {
    const auto* op = ops[tableau.stage_at(k).partition];
    const Scalar T = t + times(k) * h;
    L[k] = op ? op->dense(T) : Matrix<Scalar>::Zero(n, n);
    phi[k] = op ? op->source(T) : Vector<Scalar>::Zero(n);
  }

  Matrix<Scalar> M = Matrix<Scalar>::Identity(s * n, s * n);
  Vector<Scalar> rhs(s * n);
  for (Index g = 0; g < s; ++g) {
    Vector<Scalar> r = y;
    for (Index k = 0; k < s; ++k) {
      const Scalar a = flat.A(g, k);
      if (a == Scalar(0)) continue;
      M.block(g * n, k * n, n, n) -= (h * a) * L[k];
      r += (h * a) * phi[k];
    }
    rhs.segment(g * n, n) = r;
  }
  Eigen::PartialPivLU<Matrix<Scalar>> lu(M);
  const Vector<Scalar> Y = lu.solve(rhs);
  if (!Y.allFinite()) throw SingularMatrixError("staged system is singular");

  Vector<Scalar> out = y;
  for (Index k = 0; k < s; ++k)
    if (flat.b(k) != Scalar(0))
      out += (h * flat.b(k)) * (L[k] * Y.segment(k * n, n) + phi[k]);
  return out;
}

}  // namespace gark
