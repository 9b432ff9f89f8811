#pragma once

// Linear stability of GARK methods on the split test equation
// y' = Σ λ^{(m)} y: the stability function, its stiff limits and grid scans.

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "gark/tableau.hpp"

namespace gark {

inline constexpr double kStabilityThreshold = 1e-12;
inline constexpr double kStiffArgument = 1e8;

template <typename Scalar>
struct StabilitySample {
  std::vector<std::complex<Scalar>> z;
  std::complex<Scalar> value;

  bool stable() const { return std::abs(value) <= Scalar(1) + Scalar(kStabilityThreshold); }
};

/// R(z) = 1 + bᵀ Z (I − A Z)⁻¹ 1, where Z holds z^{(q)} on the stages of
/// partition q. `z` has one entry per tableau partition.
template <typename Scalar>
std::complex<Scalar> stability_value(const GarkTableau<Scalar>& t,
                                     std::span<const std::complex<Scalar>> z) {
  using C = std::complex<Scalar>;
  const Index P = t.num_partitions();
  if (static_cast<Index>(z.size()) != P)
    throw DimensionError("stability_value needs one argument per partition");
  const auto flat = t.flatten();
  const Index s = flat.A.rows();

  Vector<C> zs(s);
  bool stiff = false;
  for (Index q = 0; q < P; ++q) {
    if (!std::isfinite(z[q].real()) || !std::isfinite(z[q].imag()))
      throw std::invalid_argument("stability arguments must be finite");
    zs.segment(t.offset(q), t.stage_count(q)).setConstant(z[q]);
    stiff = stiff || std::abs(z[q]) > Scalar(kStiffArgument);
  }

  Matrix<C> M = Matrix<C>::Identity(s, s) - flat.A.template cast<C>() * zs.asDiagonal();
  Eigen::FullPivLU<Matrix<C>> lu(M);
  if (!lu.isInvertible()) throw SingularMatrixError("staged stability matrix is singular");
  const Vector<C> x = lu.solve(Vector<C>::Ones(s));

  if (stiff && is_stiffly_accurate(t, Scalar(1e-13))) return x(s - 1);
  return C(1) + (flat.b.template cast<C>().cwiseProduct(zs)).cwiseProduct(x).sum();
}

template <typename Scalar>
std::complex<Scalar> stability_value(const GarkTableau<Scalar>& t,
                                     std::initializer_list<std::complex<Scalar>> z) {
  return stability_value(t, std::span<const std::complex<Scalar>>(z.begin(), z.size()));
}

/// Equal-argument limit z → ∞ for an invertible flattened A: 1 − bᵀA⁻¹1.
template <typename Scalar>
std::complex<Scalar> stiff_limit_invertible(const GarkTableau<Scalar>& t) {
  const auto flat = t.flatten();
  Eigen::FullPivLU<Matrix<Scalar>> lu(flat.A);
  if (!lu.isInvertible()) throw SingularMatrixError("flattened coefficient matrix is singular");
  const Vector<Scalar> x = lu.solve(Vector<Scalar>::Ones(flat.A.rows()));
  return std::complex<Scalar>(Scalar(1) - flat.b.dot(x), Scalar(0));
}

/// Equal-argument stiff limit of a structured method whose stages all start
/// with an explicit stage: −e_lastᵀ Ã₂₂⁻¹ Ã₂₁ 1 on the vec-permuted tableau,
/// where the first block row/column is the leading stage level.
template <typename Scalar>
Scalar stiff_limit_esdirk(const StructuredTableau<Scalar>& st) {
  st.validate();
  if (st.nonstiff) throw std::invalid_argument("stiff_limit_esdirk expects no nonstiff partition");
  const auto t = assemble_structured(st);
  const auto order = to_indices(t, vec_permutation(t));
  const auto perm = permute(t.flatten(), std::span<const Index>(order));
  const Index N = st.num_partitions;
  const Index total = perm.A.rows();
  if (total <= N) throw std::invalid_argument("method has a single stage level");
  if (perm.A.topRows(N).cwiseAbs().maxCoeff() > Scalar(0))
    throw std::invalid_argument("first stage level is not explicit");

  const Index rest = total - N;
  const Matrix<Scalar> a22 = perm.A.bottomRightCorner(rest, rest);
  const Matrix<Scalar> a21 = perm.A.bottomLeftCorner(rest, N);
  Eigen::FullPivLU<Matrix<Scalar>> lu(a22);
  if (!lu.isInvertible()) throw SingularMatrixError("trailing stage block is singular");
  const Vector<Scalar> x = lu.solve(a21 * Vector<Scalar>::Ones(N));
  return -x(rest - 1);
}

enum class Coupling { Equal, Axis };

/// How a scalar grid point z maps to the per-partition arguments: all equal,
/// or z on one partition (`axis`) and zero elsewhere.
struct CouplingSpec {
  Coupling kind = Coupling::Equal;
  Index axis = 0;
};

template <typename Scalar>
struct GridRange {
  Scalar lo;
  Scalar hi;
};

/// Row-major scan (imaginary part outer) over an nre × nim grid.
template <typename Scalar>
std::vector<StabilitySample<Scalar>> scan_region(const GarkTableau<Scalar>& t, GridRange<Scalar> re,
                                                 GridRange<Scalar> im, Index nre, Index nim,
                                                 CouplingSpec coupling = {}) {
  if (nre < 2 || nim < 2) throw std::invalid_argument("scan resolution must be at least 2");
  const Index P = t.num_partitions();
  if (coupling.kind == Coupling::Axis && (coupling.axis < 0 || coupling.axis >= P))
    throw std::invalid_argument("coupling axis out of range");
  std::vector<StabilitySample<Scalar>> out;
  out.reserve(static_cast<std::size_t>(nre * nim));
  for (Index j = 0; j < nim; ++j) {
    const Scalar y = im.lo + (im.hi - im.lo) * Scalar(j) / Scalar(nim - 1);
    for (Index i = 0; i < nre; ++i) {
      const Scalar x = re.lo + (re.hi - re.lo) * Scalar(i) / Scalar(nre - 1);
      const std::complex<Scalar> zz(x, y);
      StabilitySample<Scalar> sample;
      if (coupling.kind == Coupling::Equal) {
        sample.z.assign(static_cast<std::size_t>(P), zz);
      } else {
        sample.z.assign(static_cast<std::size_t>(P), std::complex<Scalar>(0));
        sample.z[static_cast<std::size_t>(coupling.axis)] = zz;
      }
      sample.value = stability_value(t, std::span<const std::complex<Scalar>>(sample.z));
      out.push_back(std::move(sample));
    }
  }
  return out;
}

}  // namespace gark
