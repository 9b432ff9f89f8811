#pragma once

// Test problems: the 2D/3D heat equations with dimension-split finite
// difference operators, the split Dahlquist equation, and a nonlinear
// two-term problem with a prescribed steady state.

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "gark/integrator.hpp"
#include "gark/tridiagonal.hpp"

namespace gark {

template <typename Scalar>
class HeatProblem;

/// Second difference along one grid direction, (1, −2, 1)/Δ², with the
/// Dirichlet boundary values and a 1/d share of the source in φ.
template <typename Scalar>
class HeatDirectionOperator : public LinearOperator<Scalar> {
 public:
  HeatDirectionOperator(const HeatProblem<Scalar>* problem, Index direction)
      : problem_(problem), direction_(direction) {}

  Index dimension() const override { return problem_->size(); }
  Index direction() const { return direction_; }

  Vector<Scalar> apply(Scalar, const Vector<Scalar>& y) const override {
    const Index np = problem_->points();
    const Index stride = problem_->stride(direction_);
    const Scalar inv = Scalar(1) / (problem_->mesh_width() * problem_->mesh_width());
    Vector<Scalar> out(y.size());
    for (Index i = 0; i < y.size(); ++i) {
      const Index k = (i / stride) % np;
      Scalar v = Scalar(-2) * y(i);
      if (k > 0) v += y(i - stride);
      if (k + 1 < np) v += y(i + stride);
      out(i) = v * inv;
    }
    return out;
  }

  Vector<Scalar> source(Scalar t) const override {
    const Index np = problem_->points();
    const Index stride = problem_->stride(direction_);
    const Scalar dx = problem_->mesh_width();
    const Scalar inv = Scalar(1) / (dx * dx);
    const Scalar share = Scalar(1) / Scalar(problem_->spatial_dimension());
    Vector<Scalar> out(problem_->size());
    for (Index i = 0; i < out.size(); ++i) {
      auto x = problem_->coordinates(i);
      out(i) = share * problem_->source(x, t);
      const Index k = (i / stride) % np;
      if (k == 0) {
        x[direction_] = Scalar(0);
        out(i) += problem_->exact(x, t) * inv;
      }
      if (k + 1 == np) {
        x[direction_] = Scalar(1);
        out(i) += problem_->exact(x, t) * inv;
      }
    }
    return out;
  }

  Matrix<Scalar> dense(Scalar) const override {
    const Index n = problem_->size();
    const Index np = problem_->points();
    const Index stride = problem_->stride(direction_);
    const Scalar inv = Scalar(1) / (problem_->mesh_width() * problem_->mesh_width());
    Matrix<Scalar> L = Matrix<Scalar>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      const Index k = (i / stride) % np;
      L(i, i) = Scalar(-2) * inv;
      if (k > 0) L(i, i - stride) = inv;
      if (k + 1 < np) L(i, i + stride) = inv;
    }
    return L;
  }

  std::shared_ptr<const ShiftedSolver<Scalar>> factor(Scalar, Scalar alpha) const override {
    const Scalar inv = Scalar(1) / (problem_->mesh_width() * problem_->mesh_width());
    return std::make_shared<LineSolver>(
        TridiagonalFactor<Scalar>::constant(problem_->points(), -alpha * inv,
                                            Scalar(1) + Scalar(2) * alpha * inv),
        problem_->size(), problem_->stride(direction_));
  }

 private:
  // Applies one tridiagonal factorization to every grid line along a direction.
  class LineSolver : public ShiftedSolver<Scalar> {
   public:
    LineSolver(TridiagonalFactor<Scalar> f, Index n, Index stride)
        : factor_(std::move(f)), n_(n), stride_(stride) {}

    Vector<Scalar> solve(const Vector<Scalar>& rhs) const override {
      Vector<Scalar> x = rhs;
      const Index np = factor_.size();
      const Index block = stride_ * np;
      for (Index base = 0; base < n_; base += block)
        for (Index off = 0; off < stride_; ++off) factor_.solve_line(x.data() + base + off, stride_);
      return x;
    }

   private:
    TridiagonalFactor<Scalar> factor_;
    Index n_;
    Index stride_;
  };

  const HeatProblem<Scalar>* problem_;
  Index direction_;
};

/// u_t = Δu + source on the unit square (d = 2) or cube (d = 3), discretized
/// on the N_p^d interior points of a uniform grid with Δ = 1/(N_p + 1).
/// Unknowns are ordered lexicographically with x fastest.
template <typename Scalar>
class HeatProblem {
 public:
  using Point = std::array<Scalar, 3>;

  HeatProblem(Index d, Index np) : d_(d), np_(np) {
    if (d != 2 && d != 3) throw std::invalid_argument("heat problem dimension must be 2 or 3");
    if (np < 2) throw std::invalid_argument("heat problem needs N_p >= 2");
    dx_ = Scalar(1) / Scalar(np + 1);
    n_ = 1;
    for (Index m = 0; m < d; ++m) n_ *= np;
  }

  HeatProblem(const HeatProblem&) = delete;
  HeatProblem& operator=(const HeatProblem&) = delete;

  Index spatial_dimension() const { return d_; }
  Index points() const { return np_; }
  Index size() const { return n_; }
  Scalar mesh_width() const { return dx_; }
  Index stride(Index direction) const {
    Index s = 1;
    for (Index m = 0; m < direction; ++m) s *= np_;
    return s;
  }

  Point coordinates(Index i) const {
    Point x{Scalar(0), Scalar(0), Scalar(0)};
    for (Index m = 0; m < d_; ++m) {
      x[m] = Scalar((i % np_) + 1) * dx_;
      i /= np_;
    }
    return x;
  }

  Scalar exact(const Point& p, Scalar t) const {
    using std::exp;
    const Scalar x = p[0], y = p[1], z = p[2];
    const Scalar bx = (1 - x) * x, by = (1 - y) * y;
    const Scalar sx = (x + Scalar(1) / 3) * (x + Scalar(1) / 3);
    const Scalar sy = (y + Scalar(1) / 4) * (y + Scalar(1) / 4);
    if (d_ == 2) return exp(t) * (bx * by + sx + sy);
    const Scalar bz = (1 - z) * z;
    const Scalar sz = (z + Scalar(1) / 2) * (z + Scalar(1) / 2);
    return exp(t) * (bx * by * bz + sx + sy + sz);
  }

  Scalar source(const Point& p, Scalar t) const {
    using std::exp;
    const Scalar x = p[0], y = p[1], z = p[2];
    const Scalar bx = (1 - x) * x, by = (1 - y) * y;
    const Scalar sx = (x + Scalar(1) / 3) * (x + Scalar(1) / 3);
    const Scalar sy = (y + Scalar(1) / 4) * (y + Scalar(1) / 4);
    const Scalar e = exp(t);
    if (d_ == 2) return e * bx * by + e * (sx + sy - 4) + 2 * e * bx + 2 * e * by;
    const Scalar bz = (1 - z) * z;
    const Scalar sz = (z + Scalar(1) / 2) * (z + Scalar(1) / 2);
    return e * bx * by * bz + 2 * e * bx * by + 2 * e * bx * bz + 2 * e * by * bz - 6 * e +
           e * (sx + sy + sz);
  }

  Vector<Scalar> exact_grid(Scalar t) const {
    Vector<Scalar> u(n_);
    for (Index i = 0; i < n_; ++i) u(i) = exact(coordinates(i), t);
    return u;
  }

  /// u_t of the exact solution on the grid (the solution is e^t times a
  /// function of space).
  Vector<Scalar> exact_derivative_grid(Scalar t) const { return exact_grid(t); }

  const std::vector<std::shared_ptr<const HeatDirectionOperator<Scalar>>>& operators() const {
    ensure_operators();
    return ops_;
  }

  /// The split ODE; it references this problem, which must outlive it.
  PartitionedOde<Scalar> ode() const {
    ensure_operators();
    PartitionedOde<Scalar> out;
    out.dimension = n_;
    for (const auto& op : ops_) out.partitions.push_back(Partition<Scalar>::from_linear(op));
    out.exact = [this](Scalar t) { return exact_grid(t); };
    return out;
  }

  /// max |Σ L^{(m)} u + Σ φ^{(m)} − u_t| over the grid at time t.
  Scalar spatial_residual(Scalar t) const {
    ensure_operators();
    const Vector<Scalar> u = exact_grid(t);
    Vector<Scalar> r = -exact_derivative_grid(t);
    for (const auto& op : ops_) r += op->apply(t, u) + op->source(t);
    return r.cwiseAbs().maxCoeff();
  }

 private:
  void ensure_operators() const {
    std::call_once(ops_once_, [this] {
      for (Index m = 0; m < d_; ++m)
        ops_.push_back(std::make_shared<HeatDirectionOperator<Scalar>>(this, m));
    });
  }

  Index d_;
  Index np_;
  Index n_;
  Scalar dx_;
  mutable std::once_flag ops_once_;
  mutable std::vector<std::shared_ptr<const HeatDirectionOperator<Scalar>>> ops_;
};

template <typename Scalar = double>
std::unique_ptr<HeatProblem<Scalar>> heat2d(Index np) {
  return std::make_unique<HeatProblem<Scalar>>(2, np);
}

template <typename Scalar = double>
std::unique_ptr<HeatProblem<Scalar>> heat3d(Index np) {
  return std::make_unique<HeatProblem<Scalar>>(3, np);
}

template <typename Scalar>
struct ErrorNorms {
  Scalar normalized;  ///< ‖e‖₂ / √n
  Scalar raw;         ///< ‖e‖₂
};

template <typename Scalar>
ErrorNorms<Scalar> error_norms(const Vector<Scalar>& y, const HeatProblem<Scalar>& problem, Scalar t) {
  if (y.size() != problem.size()) throw DimensionError("state length does not match the grid");
  const Scalar raw = (y - problem.exact_grid(t)).norm();
  return {raw / std::sqrt(Scalar(y.size())), raw};
}

template <typename Scalar>
Scalar l2_error(const Vector<Scalar>& y, const HeatProblem<Scalar>& problem, Scalar t) {
  return error_norms(y, problem, t).normalized;
}

/// Least-squares slope of log(error) against log(1/steps).
template <typename Scalar>
Scalar fit_order(std::span<const Index> steps, std::span<const Scalar> errors) {
  if (steps.size() != errors.size()) throw DimensionError("steps and errors differ in length");
  if (steps.size() < 2) throw std::invalid_argument("fit_order needs at least two points");
  const auto n = static_cast<Scalar>(steps.size());
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(errors[i] > Scalar(0))) throw std::invalid_argument("errors must be positive");
    if (steps[i] < 1) throw std::invalid_argument("step counts must be positive");
    const Scalar x = -std::log(Scalar(steps[i]));
    const Scalar y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const Scalar den = n * sxx - sx * sx;
  if (den == Scalar(0)) throw std::invalid_argument("step counts must differ");
  return (n * sxy - sx * sy) / den;
}

/// y' = Σ_m λ^{(m)} y with complex rates, realified: the state (Re y, Im y)
/// and each rate acting as the 2×2 block [[a, −b], [b, a]].
template <typename Scalar>
struct SplitDahlquist {
  std::vector<std::complex<Scalar>> lambda;

  PartitionedOde<Scalar> ode() const {
    PartitionedOde<Scalar> out;
    out.dimension = 2;
    for (const auto& l : lambda) {
      Matrix<Scalar> L(2, 2);
      L << l.real(), -l.imag(), l.imag(), l.real();
      out.partitions.push_back(
          Partition<Scalar>::from_linear(std::make_shared<DenseLinearOperator<Scalar>>(L)));
    }
    return out;
  }

  static Vector<Scalar> state(std::complex<Scalar> y) {
    Vector<Scalar> v(2);
    v << y.real(), y.imag();
    return v;
  }

  static std::complex<Scalar> value(const Vector<Scalar>& v) { return {v(0), v(1)}; }
};

/// Autonomous nonlinear two-term ODE with steady state y*: f₁(y*) + f₂(y*)
/// = 0 while neither term vanishes there.
template <typename Scalar>
struct EquilibriumProblem {
  PartitionedOde<Scalar> ode;
  Vector<Scalar> steady_state;
};

template <typename Scalar = double>
EquilibriumProblem<Scalar> equilibrium_problem() {
  Vector<Scalar> ystar(3), w(3);
  ystar << Scalar(0.5), Scalar(-0.3), Scalar(0.8);
  w << Scalar(1), Scalar(-2), Scalar(0.5);
  Matrix<Scalar> K1(3, 3), K2(3, 3);
  K1 << 3, -1, 0, -1, 2, -0.5, 0, -0.5, 1.5;
  K2 << 1, 0.2, 0, 0.2, 2, 0.3, 0, 0.3, 4;

  auto F1 = [K1](const Vector<Scalar>& y) -> Vector<Scalar> {
    return -K1 * y - Scalar(0.25) * y.array().cube().matrix();
  };
  auto J1 = [K1](const Vector<Scalar>& y) -> Matrix<Scalar> {
    return -K1 - Scalar(0.75) * y.array().square().matrix().asDiagonal().toDenseMatrix();
  };
  auto F2 = [K2](const Vector<Scalar>& y) -> Vector<Scalar> {
    return -K2 * y.array().sin().matrix();
  };
  auto J2 = [K2](const Vector<Scalar>& y) -> Matrix<Scalar> {
    return -K2 * y.array().cos().matrix().asDiagonal().toDenseMatrix();
  };
  const Vector<Scalar> offset2 = -w - F1(ystar) - F2(ystar);

  EquilibriumProblem<Scalar> out;
  out.steady_state = ystar;
  out.ode.dimension = 3;
  Partition<Scalar> p1, p2;
  p1.f = [F1, w](Scalar, const Vector<Scalar>& y) { return Vector<Scalar>(F1(y) + w); };
  p1.jacobian = [J1](Scalar, const Vector<Scalar>& y) { return J1(y); };
  p2.f = [F2, offset2](Scalar, const Vector<Scalar>& y) { return Vector<Scalar>(F2(y) + offset2); };
  p2.jacobian = [J2](Scalar, const Vector<Scalar>& y) { return J2(y); };
  out.ode.partitions = {p1, p2};
  return out;
}

}  // namespace gark
