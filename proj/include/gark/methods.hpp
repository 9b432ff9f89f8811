#pragma once

// Constructors for the splitting schemes expressed as GARK tableaus: LOD and
// ADI classics, stabilizing-correction (Douglas family, Craig-Sneyd,
// Hundsdorfer-Verwer), Strang/Yoshida operator splitting, fractional step RK,
// and the third and fourth order ADI-GARK methods.

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "gark/tableau.hpp"

namespace gark {

/// Classical single Runge-Kutta method used as a splitting sub-integrator.
template <typename Scalar>
struct RkTableau {
  Matrix<Scalar> A;
  Vector<Scalar> b;
  Vector<Scalar> c;
  std::string name;

  Index stages() const { return b.size(); }
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> rows(std::initializer_list<std::initializer_list<Scalar>> init) {
  Matrix<Scalar> m(static_cast<Index>(init.size()), static_cast<Index>(init.begin()->size()));
  Index i = 0;
  for (const auto& r : init) {
    Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

template <typename Scalar>
Vector<Scalar> vec(std::initializer_list<Scalar> init) {
  Vector<Scalar> v(static_cast<Index>(init.size()));
  Index i = 0;
  for (const auto& x : init) v(i++) = x;
  return v;
}

inline void require_partitions(Index N) {
  if (N < 1) throw std::invalid_argument("number of partitions must be >= 1");
}

// Yanenko interior abscissae: c_0 = 0, c_N = 1, otherwise 1/2.
template <typename Scalar>
Scalar yanenko_c(Index k, Index N) {
  if (k <= 0) return Scalar(0);
  if (k >= N) return Scalar(1);
  return Scalar(0.5);
}

template <typename Scalar>
Matrix<Scalar> outer_one(const Vector<Scalar>& b, Scalar scale) {
  return scale * Vector<Scalar>::Ones(b.size()) * b.transpose();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Base Runge-Kutta methods

template <typename Scalar = double>
RkTableau<Scalar> implicit_euler() {
  return {detail::rows<Scalar>({{1}}), detail::vec<Scalar>({1}), detail::vec<Scalar>({1}),
          "implicit-euler"};
}

template <typename Scalar = double>
RkTableau<Scalar> implicit_midpoint() {
  return {detail::rows<Scalar>({{Scalar(0.5)}}), detail::vec<Scalar>({1}),
          detail::vec<Scalar>({Scalar(0.5)}), "implicit-midpoint"};
}

template <typename Scalar = double>
RkTableau<Scalar> gauss2() {
  using std::sqrt;
  const Scalar r = sqrt(Scalar(3)) / Scalar(6);
  const Scalar q(0.25);
  return {detail::rows<Scalar>({{q, q - r}, {q + r, q}}),
          detail::vec<Scalar>({Scalar(0.5), Scalar(0.5)}),
          detail::vec<Scalar>({Scalar(0.5) - r, Scalar(0.5) + r}), "gauss2"};
}

/// Crouzeix's three-stage, fourth order SDIRK.
template <typename Scalar = double>
RkTableau<Scalar> sdirk34() {
  using std::acos;
  using std::cos;
  using std::sqrt;
  const Scalar pi = acos(Scalar(-1));
  const Scalar g = Scalar(0.5) + cos(pi / Scalar(18)) / sqrt(Scalar(3));
  const Scalar d = Scalar(1) - Scalar(2) * g;
  const Scalar w = Scalar(1) / (Scalar(6) * d * d);
  return {detail::rows<Scalar>({{g, 0, 0}, {Scalar(0.5) - g, g, 0}, {2 * g, 1 - 4 * g, g}}),
          detail::vec<Scalar>({w, Scalar(1) - Scalar(2) * w, w}),
          detail::vec<Scalar>({g, Scalar(0.5), Scalar(1) - g}), "sdirk34"};
}

template <typename Scalar = double>
RkTableau<Scalar> classical_rk4() {
  const Scalar h(0.5), z(0);
  return {detail::rows<Scalar>({{z, z, z, z}, {h, z, z, z}, {z, h, z, z}, {z, z, 1, z}}),
          detail::vec<Scalar>({Scalar(1) / 6, Scalar(1) / 3, Scalar(1) / 3, Scalar(1) / 6}),
          detail::vec<Scalar>({z, h, h, 1}), "rk4"};
}

// ---------------------------------------------------------------------------
// LOD / ADI classics

/// LOD backward Euler: one implicit Euler solve per partition at t_{n+1}.
template <typename Scalar = double>
StructuredTableau<Scalar> lod_backward_euler(Index N) {
  detail::require_partitions(N);
  StructuredTableau<Scalar> st;
  st.lower = st.diag = detail::rows<Scalar>({{1}});
  st.upper = detail::rows<Scalar>({{0}});
  st.b = st.c = detail::vec<Scalar>({1});
  st.num_partitions = N;
  st.mode = AssemblyMode::Adi;
  st.name = "lod-be";
  return st;
}

/// Yanenko's LOD Crank-Nicolson: one trapezoidal sweep per partition.
template <typename Scalar = double>
GarkTableau<Scalar> yanenko_lod_cn(Index N) {
  detail::require_partitions(N);
  const Scalar h(0.5), z(0);
  std::vector<Vector<Scalar>> times;
  for (Index q = 1; q <= N; ++q)
    times.push_back(detail::vec<Scalar>({detail::yanenko_c<Scalar>(q - 1, N),
                                         detail::yanenko_c<Scalar>(q, N)}));
  auto t = assemble_blocks<Scalar>(detail::rows<Scalar>({{h, h}, {h, h}}),
                                   detail::rows<Scalar>({{z, z}, {h, h}}),
                                   Matrix<Scalar>::Zero(2, 2), detail::vec<Scalar>({h, h}), N,
                                   std::move(times));
  t.name = "yanenko";
  return t;
}

/// Symmetric Yanenko: a forward sweep followed by a reversed sweep, each with
/// half steps.
template <typename Scalar = double>
GarkTableau<Scalar> yanenko_symmetric(Index N) {
  detail::require_partitions(N);
  const Scalar a(0.25), z(0), half(0.5);
  const auto lower = detail::rows<Scalar>({{a, a, z, z}, {a, a, z, z}, {a, a, z, z}, {a, a, z, z}});
  const auto diag = detail::rows<Scalar>({{z, z, z, z}, {a, a, z, z}, {a, a, z, z}, {a, a, a, a}});
  const auto upper = detail::rows<Scalar>({{z, z, z, z}, {z, z, z, z}, {a, a, a, a}, {a, a, a, a}});
  std::vector<Vector<Scalar>> times;
  auto c = [N](Index k) { return detail::yanenko_c<Scalar>(k, N); };
  for (Index q = 1; q <= N; ++q)
    times.push_back(detail::vec<Scalar>({half * c(q - 1), half * c(q), half * (1 + c(N - q)),
                                         half * (1 + c(N + 1 - q))}));
  auto t = assemble_blocks<Scalar>(lower, diag, upper, detail::vec<Scalar>({a, a, a, a}), N,
                                   std::move(times));
  t.name = "yanenko-sym";
  return t;
}

/// Parallel Yanenko: forward and reversed sweeps from y_n, averaged.
template <typename Scalar = double>
GarkTableau<Scalar> yanenko_parallel(Index N) {
  detail::require_partitions(N);
  const Scalar h(0.5), z(0), a(0.25);
  const auto lower = detail::rows<Scalar>({{h, h, z, z}, {h, h, z, z}, {z, z, z, z}, {z, z, z, z}});
  const auto diag = detail::rows<Scalar>({{z, z, z, z}, {h, h, z, z}, {z, z, z, z}, {z, z, h, h}});
  const auto upper = detail::rows<Scalar>({{z, z, z, z}, {z, z, z, z}, {z, z, h, h}, {z, z, h, h}});
  std::vector<Vector<Scalar>> times;
  auto c = [N](Index k) { return detail::yanenko_c<Scalar>(k, N); };
  for (Index q = 1; q <= N; ++q)
    times.push_back(detail::vec<Scalar>({c(q - 1), c(q), c(N - q), c(N + 1 - q)}));
  auto t = assemble_blocks<Scalar>(lower, diag, upper, detail::vec<Scalar>({a, a, a, a}), N,
                                   std::move(times));
  t.name = "yanenko-par";
  return t;
}

/// Trapezoidal splitting: explicit half steps forward, implicit half steps back.
template <typename Scalar = double>
GarkTableau<Scalar> trapezoidal_splitting(Index N) {
  detail::require_partitions(N);
  const Scalar h(0.5), z(0);
  const auto du = detail::rows<Scalar>({{z, z}, {h, h}});
  auto t = assemble_blocks<Scalar>(detail::rows<Scalar>({{h, z}, {h, z}}), du, du,
                                   detail::vec<Scalar>({h, h}), N);
  t.name = "trapezoidal";
  return t;
}

// ---------------------------------------------------------------------------
// Stabilizing-correction schemes

namespace detail {

template <typename Scalar>
StructuredTableau<Scalar> douglas_core(Index N, Scalar theta) {
  require_partitions(N);
  StructuredTableau<Scalar> st;
  st.lower = st.diag = rows<Scalar>({{0, 0}, {1 - theta, theta}});
  st.upper = rows<Scalar>({{0, 0}, {1, 0}});
  st.b = vec<Scalar>({1 - theta, theta});
  st.c = vec<Scalar>({0, 1});
  st.num_partitions = N;
  st.mode = AssemblyMode::Adi;
  return st;
}

}  // namespace detail

/// Douglas splitting: explicit Euler predictor followed by one stabilizing
/// correction per stiff partition. `with_nonstiff` prepends the explicit
/// partition f^{(0)}.
template <typename Scalar = double>
StructuredTableau<Scalar> douglas(Index N, Scalar theta, bool with_nonstiff) {
  auto st = detail::douglas_core(N, theta);
  st.name = "douglas";
  if (with_nonstiff) {
    st.nonstiff = NonstiffBlocks<Scalar>{detail::rows<Scalar>({{0}}), detail::rows<Scalar>({{0}, {1}}),
                                         detail::rows<Scalar>({{0, 0}}), detail::vec<Scalar>({1}),
                                         detail::vec<Scalar>({0})};
  }
  return st;
}

/// Douglas with an initial stabilizing correction for f^{(0)}.
template <typename Scalar = double>
StructuredTableau<Scalar> douglas_modified_first(Index N, Scalar theta) {
  auto st = detail::douglas_core(N, theta);
  st.name = "douglas-mod-first";
  const auto explicit_euler = detail::rows<Scalar>({{0, 0}, {1, 0}});
  st.nonstiff = NonstiffBlocks<Scalar>{explicit_euler,
                                       detail::rows<Scalar>({{0, 0}, {1 - theta, theta}}),
                                       explicit_euler, detail::vec<Scalar>({1 - theta, theta}),
                                       detail::vec<Scalar>({0, 1})};
  return st;
}

/// Douglas with the f^{(0)} stabilizing correction at the end of the step.
template <typename Scalar = double>
StructuredTableau<Scalar> douglas_modified_last(Index N, Scalar theta) {
  auto st = detail::douglas_core(N, theta);
  st.name = "douglas-mod-last";
  const auto explicit_euler = detail::rows<Scalar>({{0, 0}, {1, 0}});
  st.nonstiff = NonstiffBlocks<Scalar>{explicit_euler, explicit_euler,
                                       detail::rows<Scalar>({{0, 0}, {1 - theta, theta}}),
                                       detail::vec<Scalar>({1 - theta, theta}),
                                       detail::vec<Scalar>({0, 1})};
  return st;
}

/// Modified Craig-Sneyd; mu = 0 gives the original Craig-Sneyd scheme.
template <typename Scalar = double>
StructuredTableau<Scalar> modified_craig_sneyd(Index N, Scalar theta, Scalar sigma, Scalar mu) {
  detail::require_partitions(N);
  StructuredTableau<Scalar> st;
  const Scalar z(0), t = theta;
  st.lower = st.diag = detail::rows<Scalar>(
      {{z, z, z, z}, {1 - t, t, z, z}, {1 - t, t, z, z}, {1 - mu - t, z, mu, t}});
  st.upper = detail::rows<Scalar>(
      {{z, z, z, z}, {1, z, z, z}, {1 - t, t, z, z}, {1 - mu, z, mu, z}});
  st.b = detail::vec<Scalar>({1 - mu - t, z, mu, t});
  st.c = detail::vec<Scalar>({0, 1, 1, 1});
  st.num_partitions = N;
  st.mode = AssemblyMode::Adi;
  st.name = "mcs";
  st.nonstiff = NonstiffBlocks<Scalar>{
      detail::rows<Scalar>({{0, 0}, {1, 0}}),
      detail::rows<Scalar>({{0, 0}, {1, 0}, {1, 0}, {1 - sigma - mu, sigma + mu}}),
      detail::rows<Scalar>({{z, z, z, z}, {1 - t, t, z, z}}),
      detail::vec<Scalar>({1 - sigma - mu, sigma + mu}), detail::vec<Scalar>({0, 1})};
  return st;
}

/// Hundsdorfer-Verwer stabilizing-correction scheme.
template <typename Scalar = double>
StructuredTableau<Scalar> hundsdorfer_verwer(Index N, Scalar theta, Scalar mu) {
  detail::require_partitions(N);
  StructuredTableau<Scalar> st;
  const Scalar z(0), t = theta;
  st.lower = st.diag = detail::rows<Scalar>(
      {{z, z, z, z}, {1 - t, t, z, z}, {1 - t, t, z, z}, {1 - mu, z, mu - t, t}});
  st.upper = detail::rows<Scalar>(
      {{z, z, z, z}, {1, z, z, z}, {1 - t, t, z, z}, {1 - mu, z, mu, z}});
  st.b = detail::vec<Scalar>({1 - mu, z, mu - t, t});
  st.c = detail::vec<Scalar>({0, 1, 1, 1});
  st.num_partitions = N;
  st.mode = AssemblyMode::Adi;
  st.name = "hv";
  st.nonstiff = NonstiffBlocks<Scalar>{
      detail::rows<Scalar>({{0, 0}, {1, 0}}),
      detail::rows<Scalar>({{0, 0}, {1, 0}, {1, 0}, {1 - mu, mu}}),
      detail::rows<Scalar>({{z, z, z, z}, {1 - t, t, z, z}}), detail::vec<Scalar>({1 - mu, mu}),
      detail::vec<Scalar>({0, 1})};
  return st;
}

// ---------------------------------------------------------------------------
// Operator splitting

namespace detail {

template <typename Scalar>
void require_consistent_base(const RkTableau<Scalar>& base) {
  const Index s = base.b.size();
  if (s < 1 || base.A.rows() != s || base.A.cols() != s || base.c.size() != s)
    throw DimensionError("base Runge-Kutta tableau has inconsistent dimensions");
  if ((base.A.rowwise().sum() - base.c).cwiseAbs().maxCoeff() > Scalar(1e-12))
    throw DimensionError("base Runge-Kutta abscissae must equal the row sums of A");
}

}  // namespace detail

/// Strang splitting over N partitions: a forward half-step sweep followed by
/// a reversed half-step sweep, each sub-integration one step of `base`.
template <typename Scalar>
GarkTableau<Scalar> strang(const RkTableau<Scalar>& base, Index N) {
  detail::require_partitions(N);
  detail::require_consistent_base(base);
  const Index s = base.stages();
  const Scalar half(0.5);
  const Matrix<Scalar> hb = detail::outer_one(base.b, half);
  const Matrix<Scalar> hA = half * base.A;
  const Matrix<Scalar> zero = Matrix<Scalar>::Zero(s, s);

  Matrix<Scalar> lower(2 * s, 2 * s), diag(2 * s, 2 * s), upper(2 * s, 2 * s);
  lower << hb, zero, hb, zero;
  diag << hA, zero, hb, hA;
  upper << zero, zero, hb, hb;
  Vector<Scalar> b(2 * s);
  b << half * base.b, half * base.b;

  auto t = assemble_blocks<Scalar>(lower, diag, upper, b, N);
  t.name = "strang";
  return t;
}

template <typename Scalar>
struct YoshidaCoefficients {
  std::array<Scalar, 4> alpha;
  std::array<Scalar, 4> beta;
  Scalar theta;
};

template <typename Scalar = double>
YoshidaCoefficients<Scalar> yoshida4_coefficients() {
  using std::cbrt;
  const Scalar cr = cbrt(Scalar(2));
  const Scalar d = Scalar(2) - cr;
  const Scalar a1 = Scalar(1) / (Scalar(2) * d);
  const Scalar a2 = (Scalar(1) - cr) / (Scalar(2) * d);
  return {{a1, a2, a2, a1}, {Scalar(1) / d, -cr / d, Scalar(1) / d, Scalar(0)}, Scalar(1) / d};
}

/// Yoshida's fourth order triple-jump composition of Strang steps for two
/// partitions. The middle sub-step runs backward in time.
template <typename Scalar>
GarkTableau<Scalar> yoshida4(const RkTableau<Scalar>& base, Index N = 2) {
  if (N != 2) throw std::invalid_argument("yoshida4 is formulated for two partitions");
  detail::require_consistent_base(base);
  const auto coef = yoshida4_coefficients<Scalar>();
  const Index s = base.stages();
  const Index L = 4;
  const Matrix<Scalar> ob = Vector<Scalar>::Ones(s) * base.b.transpose();

  Matrix<Scalar> a11 = Matrix<Scalar>::Zero(L * s, L * s), a12 = a11, a21 = a11, a22 = a11;
  Vector<Scalar> b1(L * s), b2(L * s);
  for (Index l = 0; l < L; ++l) {
    for (Index k = 0; k < L; ++k) {
      if (k < l) {
        a11.block(l * s, k * s, s, s) = coef.alpha[k] * ob;
        a12.block(l * s, k * s, s, s) = coef.beta[k] * ob;
        a22.block(l * s, k * s, s, s) = coef.beta[k] * ob;
      }
      if (k <= l) a21.block(l * s, k * s, s, s) = coef.alpha[k] * ob;
    }
    a11.block(l * s, l * s, s, s) = coef.alpha[l] * base.A;
    a22.block(l * s, l * s, s, s) = coef.beta[l] * base.A;
    b1.segment(l * s, s) = coef.alpha[l] * base.b;
    b2.segment(l * s, s) = coef.beta[l] * base.b;
  }
  GarkTableau<Scalar> t({a11, a12, a21, a22}, {b1, b2});
  t.name = "yoshida4";
  return t;
}

// ---------------------------------------------------------------------------
// Fractional step Runge-Kutta

/// FSRK method: each stage j is implicit in the single direction
/// dimension_of_stage[j] (1-based); `nonstiff` couples the explicit term g.
template <typename Scalar>
struct FsrkSpec {
  Index num_dimensions = 1;
  std::vector<Index> dimension_of_stage;
  std::vector<Matrix<Scalar>> implicit;  // a^{(m)}, s x s, one per direction
  Matrix<Scalar> nonstiff;               // a^{(0)}, s x s
  std::vector<Vector<Scalar>> weights;   // b^{(m)}
  Vector<Scalar> nonstiff_weights;       // b^{(0)}
  Vector<Scalar> abscissae;              // T_j

  Index stages() const { return static_cast<Index>(dimension_of_stage.size()); }
};

namespace detail {

template <typename Scalar>
std::vector<std::vector<Index>> fsrk_index_sets(const FsrkSpec<Scalar>& spec) {
  const Index N = spec.num_dimensions;
  const Index s = spec.stages();
  if (N < 1) throw std::invalid_argument("FSRK needs at least one direction");
  if (static_cast<Index>(spec.implicit.size()) != N || static_cast<Index>(spec.weights.size()) != N)
    throw DimensionError("FSRK needs one implicit matrix and weight vector per direction");
  if (spec.nonstiff.rows() != s || spec.nonstiff.cols() != s || spec.nonstiff_weights.size() != s ||
      spec.abscissae.size() != s)
    throw DimensionError("FSRK nonstiff coefficients have wrong shape");
  std::vector<std::vector<Index>> sets(N);
  for (Index j = 0; j < s; ++j) {
    const Index m = spec.dimension_of_stage[j];
    if (m < 1 || m > N) throw std::invalid_argument("stage dimension out of range");
    sets[m - 1].push_back(j);
  }
  for (Index m = 0; m < N; ++m) {
    const auto& a = spec.implicit[m];
    if (a.rows() != s || a.cols() != s || spec.weights[m].size() != s)
      throw DimensionError("FSRK implicit coefficients have wrong shape");
    for (Index j = 0; j < s; ++j) {
      if (spec.dimension_of_stage[j] == m + 1) continue;
      if (a.col(j).cwiseAbs().maxCoeff() != Scalar(0) || spec.weights[m](j) != Scalar(0))
        throw std::invalid_argument("FSRK stage " + std::to_string(j + 1) +
                                    " carries coefficients in more than one direction");
    }
    if (sets[m].empty())
      throw std::invalid_argument("FSRK direction " + std::to_string(m + 1) + " owns no stage");
  }
  return sets;
}

}  // namespace detail

/// Maps an FSRK method to an (N+1)-partition GARK tableau; partition 0 is g.
template <typename Scalar>
GarkTableau<Scalar> fsrk_to_gark(const FsrkSpec<Scalar>& spec) {
  const auto sets = detail::fsrk_index_sets(spec);
  const Index N = spec.num_dimensions;
  const Index s = spec.stages();
  std::vector<Index> all(s);
  for (Index j = 0; j < s; ++j) all[j] = j;

  // Row index set of partition p (0 = nonstiff, all stages).
  auto rows_of = [&](Index p) -> const std::vector<Index>& { return p == 0 ? all : sets[p - 1]; };
  auto coeffs_of = [&](Index p) -> const Matrix<Scalar>& {
    return p == 0 ? spec.nonstiff : spec.implicit[p - 1];
  };

  std::vector<Matrix<Scalar>> blocks;
  std::vector<Vector<Scalar>> weights, times;
  for (Index q = 0; q <= N; ++q) {
    const auto& rq = rows_of(q);
    for (Index m = 0; m <= N; ++m) {
      const auto& rm = rows_of(m);
      const auto& a = coeffs_of(m);
      Matrix<Scalar> blk(rq.size(), rm.size());
      for (std::size_t i = 0; i < rq.size(); ++i)
        for (std::size_t j = 0; j < rm.size(); ++j) blk(i, j) = a(rq[i], rm[j]);
      blocks.push_back(std::move(blk));
    }
    const Vector<Scalar>& w = q == 0 ? spec.nonstiff_weights : spec.weights[q - 1];
    Vector<Scalar> bq(rq.size()), cq(rq.size());
    for (std::size_t i = 0; i < rq.size(); ++i) {
      bq(i) = w(rq[i]);
      cq(i) = spec.abscissae(rq[i]);
    }
    weights.push_back(std::move(bq));
    times.push_back(std::move(cq));
  }
  GarkTableau<Scalar> t(std::move(blocks), std::move(weights), true, std::move(times));
  t.name = "fsrk";
  return t;
}

/// Inverse of fsrk_to_gark given the stage-to-direction map.
template <typename Scalar>
FsrkSpec<Scalar> gark_to_fsrk(const GarkTableau<Scalar>& t, const std::vector<Index>& dimension_of_stage) {
  if (!t.has_nonstiff_partition()) throw std::invalid_argument("FSRK tableaus carry partition 0");
  FsrkSpec<Scalar> spec;
  const Index N = t.num_stiff_partitions();
  const Index s = static_cast<Index>(dimension_of_stage.size());
  spec.num_dimensions = N;
  spec.dimension_of_stage = dimension_of_stage;
  std::vector<std::vector<Index>> sets(N);
  for (Index j = 0; j < s; ++j) sets[dimension_of_stage[j] - 1].push_back(j);
  std::vector<Index> all(s);
  for (Index j = 0; j < s; ++j) all[j] = j;
  auto rows_of = [&](Index p) -> const std::vector<Index>& { return p == 0 ? all : sets[p - 1]; };

  spec.nonstiff = Matrix<Scalar>::Zero(s, s);
  spec.implicit.assign(N, Matrix<Scalar>::Zero(s, s));
  spec.weights.assign(N, Vector<Scalar>::Zero(s));
  spec.nonstiff_weights = Vector<Scalar>::Zero(s);
  spec.abscissae = Vector<Scalar>::Zero(s);
  for (Index q = 0; q <= N; ++q) {
    const auto& rq = rows_of(q);
    for (Index m = 0; m <= N; ++m) {
      const auto& rm = rows_of(m);
      Matrix<Scalar>& a = m == 0 ? spec.nonstiff : spec.implicit[m - 1];
      for (std::size_t i = 0; i < rq.size(); ++i)
        for (std::size_t j = 0; j < rm.size(); ++j) a(rq[i], rm[j]) = t.block(q, m)(i, j);
    }
    Vector<Scalar>& w = q == 0 ? spec.nonstiff_weights : spec.weights[q - 1];
    for (std::size_t i = 0; i < rq.size(); ++i) {
      w(rq[i]) = t.weights(q)(i);
      spec.abscissae(rq[i]) = t.stage_times(q)(i);
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// High order ADI-GARK methods

/// Middle root of 6γ³ − 18γ² + 9γ − 1, refined by Newton's method.
template <typename Scalar = double>
Scalar adi_gark3_gamma() {
  using std::abs;
  Scalar g = Scalar(0.43586652150845900L);
  for (int it = 0; it < 50; ++it) {
    const Scalar f = ((Scalar(6) * g - Scalar(18)) * g + Scalar(9)) * g - Scalar(1);
    const Scalar df = (Scalar(18) * g - Scalar(36)) * g + Scalar(9);
    const Scalar step = f / df;
    g -= step;
    if (abs(step) < Scalar(1e-16L)) break;
  }
  return g;
}

namespace detail {

template <typename Scalar>
StructuredTableau<Scalar> adi_structure(Matrix<Scalar> implicit, Matrix<Scalar> explicit_part,
                                        Vector<Scalar> b, Vector<Scalar> c, AssemblyMode mode,
                                        Index N) {
  require_partitions(N);
  if (mode == AssemblyMode::General)
    throw std::invalid_argument("ADI-GARK methods are assembled in adi or parallel mode");
  StructuredTableau<Scalar> st;
  st.diag = implicit;
  st.upper = explicit_part;
  st.lower = mode == AssemblyMode::Adi ? std::move(implicit) : std::move(explicit_part);
  st.b = std::move(b);
  st.c = std::move(c);
  st.num_partitions = N;
  st.mode = mode;
  return st;
}

}  // namespace detail

/// Four-stage third order ADI-GARK method (ESDIRK implicit part).
template <typename Scalar = double>
StructuredTableau<Scalar> adi_gark3(AssemblyMode mode = AssemblyMode::Adi, Index N = 2) {
  const Scalar g = adi_gark3_gamma<Scalar>();
  const Scalar z(0);
  Matrix<Scalar> AI = detail::rows<Scalar>({
      {z, z, z, z},
      {g, g, z, z},
      {(215 * g + 424) / (2624 - 1536 * g), (264 - 841 * g) / (1536 * g + 448), g, z},
      {(2 * g + 1) / (4 * g + 8), (31 - 14 * g) / (352 - 900 * g), (320 * g + 224) / (575 - 477 * g), g},
  });
  Matrix<Scalar> AE = detail::rows<Scalar>({
      {z, z, z, z},
      {2 * g, z, z, z},
      {(12526987 * g + 655304) / (8876160 * g + 7175968), 15 * (215 * g + 152) / (2144 * (92 * g - 9)), z, z},
      {(2370311 * g - 563481) / (134 * (17071 * g + 921)),
       (380783 - 137789 * g) / (134 * (17727 * g - 15511)), (1000 - 304 * g) / (1371 * g + 379), z},
  });
  Vector<Scalar> b = AI.row(3).transpose();
  Vector<Scalar> c = detail::vec<Scalar>({z, 2 * g, (g + 2) / 4, Scalar(1)});
  auto st = detail::adi_structure(std::move(AI), std::move(AE), std::move(b), std::move(c), mode, N);
  st.name = "adi-gark3";
  return st;
}

/// Six-stage fourth order ADI-GARK method; the implicit part is
/// ESDIRK4(3)6L[2]SA.
template <typename Scalar = double>
StructuredTableau<Scalar> adi_gark4(AssemblyMode mode = AssemblyMode::Adi, Index N = 2) {
  using std::sqrt;
  const Scalar r = sqrt(Scalar(2));
  const Scalar z(0), q(0.25);
  auto S = [](long double v) { return Scalar(v); };

  const Scalar a31 = (1 - r) / 8;
  const Scalar a41 = (5 - 7 * r) / 64;
  const Scalar a51 = (S(-54539) * r - S(13796)) / S(125000);
  const Scalar b1 = (S(1181) - S(987) * r) / S(13782);
  const Scalar b3 = S(47) * (S(1783) * r - S(267)) / S(273343);
  const Scalar b4 = S(16) * (S(-3525) * r + S(22922)) / S(571953);
  const Scalar b5 = S(15625) * (S(-376) * r - S(97)) / S(90749876);
  Matrix<Scalar> AI = detail::rows<Scalar>({
      {z, z, z, z, z, z},
      {q, q, z, z, z, z},
      {a31, a31, q, z, z, z},
      {a41, a41, 7 * (r + 1) / 32, q, z, z},
      {a51, a51, (S(132109) * r + S(506605)) / S(437500), S(166) * (S(376) * r - S(97)) / S(109375), q, z},
      {b1, b1, b3, b4, b5, q},
  });

  const Scalar e31 = S(4) / S(7) - 1 / (2 * r);
  const Scalar e41 = (S(192440351) * r + S(245255777)) / S(1090446224);
  const Scalar e42 = (S(1059385241) - S(192440351) * r) / S(1090446224);
  const Scalar e51 = (S(3246103358815879.0L) * r - S(4074461458752694.0L)) / S(1911688536450000.0L);
  const Scalar e52 = (S(15031561460125012.0L) - S(11088311262828073.0L) * r) / S(1911688536450000.0L);
  const Scalar e53 = (S(1307034650668699.0L) * r - S(1700986476469053.0L)) / S(318614756075000.0L);
  const Scalar e61 = (S(2357123976102849118.0L) - S(3355327406349634955.0L) * r) / S(1982691401525245488.0L);
  const Scalar e62 = (S(4815717108798877157.0L) * r - S(9817340273693398308.0L)) / S(1982691401525245488.0L);
  const Scalar e63 = (S(3722435241465127195.0L) - S(759937254896120301.0L) * r) / S(991345700762622744.0L);
  const Scalar e64 = (S(7576400) * r + S(387641523)) / S(385686973);
  const Scalar e65 = S(625) * (S(376) * r + S(97)) / S(22687469);
  Matrix<Scalar> AE = detail::rows<Scalar>({
      {z, z, z, z, z, z},
      {S(0.5), z, z, z, z, z},
      {e31, S(-1) / S(14), z, z, z, z},
      {e41, e42, S(-4) / S(7), z, z, z},
      {e51, e52, e53, S(11) / S(17), z, z},
      {e61, e62, e63, e64, e65, z},
  });
  Vector<Scalar> b = AI.row(5).transpose();
  Vector<Scalar> c = detail::vec<Scalar>({z, S(0.5), (2 - r) / 4, S(5) / S(8), S(26) / S(25), S(1)});
  auto st = detail::adi_structure(std::move(AI), std::move(AE), std::move(b), std::move(c), mode, N);
  st.name = "adi-gark4";
  return st;
}

}  // namespace gark
