#pragma once

// GARK order-condition residuals through order four, the coupling conditions
// of the structured class, and order classification.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "gark/tableau.hpp"

namespace gark {

inline constexpr double kDefaultOrderTolerance = 1e-10;

/// Residual of one order condition instance (computed value minus target).
/// `indices` holds conventional partition labels in the order the condition
/// id names them.
template <typename Scalar>
struct ConditionResidual {
  int order = 0;
  std::string condition_id;
  std::vector<int> indices;
  Scalar target{};
  Scalar residual{};
};

namespace detail {

template <typename Scalar>
ConditionResidual<Scalar> make_residual(int order, const char* id, std::vector<int> idx,
                                        Scalar value, Scalar target) {
  return {order, id, std::move(idx), target, value - target};
}

}  // namespace detail

/// Every condition of order <= p over all partition index tuples. The
/// symmetric products (c×c at order 3, c×c×c and A(c×c) at order 4) are
/// enumerated over non-decreasing index tuples only.
template <typename Scalar>
std::vector<ConditionResidual<Scalar>> residuals_up_to(const GarkTableau<Scalar>& t, int p) {
  if (p < 1 || p > 4) throw std::invalid_argument("order must be in [1, 4]");
  const Index P = t.num_partitions();
  auto L = [&](Index q) { return t.label(q); };
  const Scalar half(0.5), third = Scalar(1) / Scalar(3), sixth = Scalar(1) / Scalar(6),
               quarter(0.25), eighth(0.125), twelfth = Scalar(1) / Scalar(12),
               twentyfourth = Scalar(1) / Scalar(24);

  std::vector<ConditionResidual<Scalar>> out;
  for (Index sg = 0; sg < P; ++sg)
    out.push_back(detail::make_residual(1, "b.1", {L(sg)}, t.weights(sg).sum(), Scalar(1)));
  if (p < 2) return out;

  for (Index sg = 0; sg < P; ++sg)
    for (Index nu = 0; nu < P; ++nu)
      out.push_back(detail::make_residual(2, "b.c", {L(sg), L(nu)},
                                          t.weights(sg).dot(t.abscissae(sg, nu)), half));
  if (p < 3) return out;

  for (Index sg = 0; sg < P; ++sg) {
    const auto& b = t.weights(sg);
    for (Index nu = 0; nu < P; ++nu)
      for (Index mu = nu; mu < P; ++mu)
        out.push_back(detail::make_residual(
            3, "b.(c*c)", {L(sg), L(nu), L(mu)},
            b.dot(t.abscissae(sg, nu).cwiseProduct(t.abscissae(sg, mu))), third));
    for (Index nu = 0; nu < P; ++nu)
      for (Index mu = 0; mu < P; ++mu)
        out.push_back(detail::make_residual(3, "b.A.c", {L(sg), L(nu), L(mu)},
                                            b.dot(t.block(sg, nu) * t.abscissae(nu, mu)), sixth));
  }
  if (p < 4) return out;

  for (Index sg = 0; sg < P; ++sg) {
    const auto& b = t.weights(sg);
    for (Index la = 0; la < P; ++la)
      for (Index mu = la; mu < P; ++mu)
        for (Index nu = mu; nu < P; ++nu)
          out.push_back(detail::make_residual(
              4, "b.(c*c*c)", {L(sg), L(la), L(mu), L(nu)},
              b.dot(t.abscissae(sg, la)
                        .cwiseProduct(t.abscissae(sg, mu))
                        .cwiseProduct(t.abscissae(sg, nu))),
              quarter));
    for (Index mu = 0; mu < P; ++mu) {
      const Vector<Scalar> bc = b.cwiseProduct(t.abscissae(sg, mu));
      for (Index nu = 0; nu < P; ++nu)
        for (Index la = 0; la < P; ++la)
          out.push_back(detail::make_residual(4, "(b*c).A.c", {L(sg), L(mu), L(nu), L(la)},
                                              bc.dot(t.block(sg, nu) * t.abscissae(nu, la)),
                                              eighth));
    }
    for (Index la = 0; la < P; ++la)
      for (Index mu = 0; mu < P; ++mu)
        for (Index nu = mu; nu < P; ++nu)
          out.push_back(detail::make_residual(
              4, "b.A.(c*c)", {L(sg), L(la), L(mu), L(nu)},
              b.dot(t.block(sg, la) * t.abscissae(la, mu).cwiseProduct(t.abscissae(la, nu))),
              twelfth));
    for (Index la = 0; la < P; ++la) {
      const Vector<Scalar> bA = t.block(sg, la).transpose() * b;
      for (Index nu = 0; nu < P; ++nu)
        for (Index mu = 0; mu < P; ++mu)
          out.push_back(detail::make_residual(4, "b.A.A.c", {L(sg), L(la), L(nu), L(mu)},
                                              bA.dot(t.block(la, nu) * t.abscissae(nu, mu)),
                                              twentyfourth));
    }
  }
  return out;
}

/// Largest p <= 4 whose conditions (and all lower ones) hold within tol.
template <typename Scalar>
int classical_order(const GarkTableau<Scalar>& t, Scalar tol = Scalar(kDefaultOrderTolerance)) {
  const auto res = residuals_up_to(t, 4);
  int order = 4;
  for (const auto& r : res)
    if (std::abs(r.residual) >= tol) order = std::min(order, r.order - 1);
  return order;
}

/// Classical order of the single Runge-Kutta method (A, b, c = A 1).
template <typename Scalar>
int rk_order(const Matrix<Scalar>& A, const Vector<Scalar>& b,
             Scalar tol = Scalar(kDefaultOrderTolerance)) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw DimensionError("rk_order needs a square A matching b");
  GarkTableau<Scalar> t({A}, {b});
  return classical_order(t, tol);
}

/// The six order-4 coupling conditions bᵀ X Y c = 1/24 for X ≠ Y drawn from
/// {A^D, A^U, A^L}.
template <typename Scalar>
struct CouplingResiduals {
  static constexpr std::array<const char*, 6> labels = {
      "b.AD.AU.c", "b.AU.AD.c", "b.AL.AU.c", "b.AU.AL.c", "b.AD.AL.c", "b.AL.AD.c"};

  std::array<Scalar, 6> residual{};
  /// True where the condition coincides with another one for the given mode
  /// (or reduces to a component-method condition).
  std::array<bool, 6> redundant{};
  /// The reduction to these six conditions assumes internal consistency.
  bool internally_consistent = false;
};

template <typename Scalar>
CouplingResiduals<Scalar> coupling_residuals_special(const StructuredTableau<Scalar>& st,
                                                     Scalar tol = Scalar(kDefaultOrderTolerance)) {
  st.validate();
  const auto& b = st.b;
  const auto& c = st.c;
  const auto& D = st.diag;
  const auto& U = st.upper;
  const auto& Lw = st.lower;
  const Scalar target = Scalar(1) / Scalar(24);
  CouplingResiduals<Scalar> out;
  out.residual = {b.dot(D * (U * c)) - target,  b.dot(U * (D * c)) - target,
                  b.dot(Lw * (U * c)) - target, b.dot(U * (Lw * c)) - target,
                  b.dot(D * (Lw * c)) - target, b.dot(Lw * (D * c)) - target};
  switch (st.mode) {
    case AssemblyMode::Adi:
    case AssemblyMode::ParallelAdi:
      out.redundant = {false, false, true, true, true, true};
      break;
    case AssemblyMode::General:
      out.redundant = {false, false, false, false, false, false};
      break;
  }
  const Vector<Scalar> one = Vector<Scalar>::Ones(b.size());
  out.internally_consistent = (Lw * one - c).cwiseAbs().maxCoeff() <= tol &&
                              (D * one - c).cwiseAbs().maxCoeff() <= tol &&
                              (U * one - c).cwiseAbs().maxCoeff() <= tol;
  return out;
}

}  // namespace gark
