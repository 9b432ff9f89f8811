#pragma once

// Thomas algorithm for tridiagonal systems, including a factor-once form
// that solves many strided lines of a lexicographically ordered grid.

#include <cmath>
#include <vector>

#include "gark/types.hpp"

namespace gark {

/// Factorization of a tridiagonal matrix with sub-diagonal `lower`
/// (length n-1), diagonal `diag` (length n) and super-diagonal `upper`
/// (length n-1). No pivoting.
template <typename Scalar>
class TridiagonalFactor {
 public:
  TridiagonalFactor(const Vector<Scalar>& lower, const Vector<Scalar>& diag,
                    const Vector<Scalar>& upper)
      : lower_(lower), inv_pivot_(diag.size()), upper_mod_(diag.size()) {
    const Index n = diag.size();
    if (n < 1 || lower.size() != n - 1 || upper.size() != n - 1)
      throw DimensionError("tridiagonal bands have inconsistent lengths");
    Scalar pivot = diag(0);
    for (Index i = 0; i < n; ++i) {
      if (i > 0) pivot = diag(i) - lower(i - 1) * upper_mod_(i - 1);
      if (pivot == Scalar(0) || !std::isfinite(static_cast<double>(pivot)))
        throw SingularMatrixError("zero pivot in tridiagonal solve");
      inv_pivot_(i) = Scalar(1) / pivot;
      upper_mod_(i) = i + 1 < n ? upper(i) * inv_pivot_(i) : Scalar(0);
    }
  }

  /// Constant-coefficient matrix tridiag(off, diag, off) of size n.
  static TridiagonalFactor constant(Index n, Scalar off, Scalar diag) {
    return TridiagonalFactor(Vector<Scalar>::Constant(n - 1, off), Vector<Scalar>::Constant(n, diag),
                             Vector<Scalar>::Constant(n - 1, off));
  }

  Index size() const { return inv_pivot_.size(); }

  /// Solves in place for the line x[0], x[stride], ..., x[(n-1)*stride].
  void solve_line(Scalar* x, Index stride) const {
    const Index n = size();
    x[0] *= inv_pivot_(0);
    for (Index i = 1; i < n; ++i)
      x[i * stride] = (x[i * stride] - lower_(i - 1) * x[(i - 1) * stride]) * inv_pivot_(i);
    for (Index i = n - 2; i >= 0; --i) x[i * stride] -= upper_mod_(i) * x[(i + 1) * stride];
  }

  Vector<Scalar> solve(const Vector<Scalar>& rhs) const {
    if (rhs.size() != size()) throw DimensionError("right-hand side length mismatch");
    Vector<Scalar> x = rhs;
    solve_line(x.data(), 1);
    return x;
  }

 private:
  Vector<Scalar> lower_;
  Vector<Scalar> inv_pivot_;
  Vector<Scalar> upper_mod_;
};

template <typename Scalar>
Vector<Scalar> thomas_solve(const Vector<Scalar>& lower, const Vector<Scalar>& diag,
                            const Vector<Scalar>& upper, const Vector<Scalar>& rhs) {
  return TridiagonalFactor<Scalar>(lower, diag, upper).solve(rhs);
}

}  // namespace gark
