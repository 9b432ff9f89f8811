#include <cmath>

#include "doctest.h"
#include "gark/methods.hpp"
#include "gark/order_conditions.hpp"
#include "gark/stability.hpp"

using namespace gark;

namespace {

constexpr double kTol = 1e-12;

int order_of(const StructuredTableau<double>& st) { return classical_order(assemble_structured(st)); }

bool imim(const GarkTableau<double>& t) { return find_imim_permutation(t).has_value(); }

}  // namespace

TEST_CASE("LOD backward Euler") {
  const auto st = lod_backward_euler<double>(2);
  const auto t = assemble_structured(st);
  CHECK(classical_order(t) == 1);
  CHECK(is_stiffly_accurate(t, kTol));
  CHECK_FALSE(is_internally_consistent(t, kTol));
  CHECK(st.mode == AssemblyMode::Adi);

  const auto single = assemble_structured(lod_backward_euler<double>(1));
  CHECK(single.block(0, 0)(0, 0) == 1.0);
  CHECK(single.weights(0)(0) == 1.0);

  CHECK_THROWS_AS(lod_backward_euler<double>(0), std::invalid_argument);
}

TEST_CASE("LOD backward Euler amplification is the product of the scalar solves") {
  const auto t = assemble_structured(lod_backward_euler<double>(3));
  const std::complex<double> z1(-0.3, 0.1), z2(-2.0, 0.0), z3(0.4, -1.0);
  const auto R = stability_value(t, {z1, z2, z3});
  const auto expected = 1.0 / ((1.0 - z1) * (1.0 - z2) * (1.0 - z3));
  CHECK(std::abs(R - expected) < 1e-14);
}

TEST_CASE("Yanenko LOD Crank-Nicolson") {
  const auto t = yanenko_lod_cn<double>(2);
  CHECK(classical_order(t) == 1);
  CHECK(is_stiffly_accurate(t, kTol));
  CHECK_FALSE(is_internally_consistent(t, kTol));
  for (Index N = 1; N <= 4; ++N) CHECK(is_stiffly_accurate(yanenko_lod_cn<double>(N), kTol));
  CHECK(classical_order(yanenko_lod_cn<double>(1)) == 2);

  const auto t3 = yanenko_lod_cn<double>(3);
  CHECK(t3.stage_times(0)(0) == 0.0);
  CHECK(t3.stage_times(0)(1) == 0.5);
  CHECK(t3.stage_times(1)(0) == 0.5);
  CHECK(t3.stage_times(2)(1) == 1.0);
}

TEST_CASE("symmetric Yanenko") {
  const auto t = yanenko_symmetric<double>(2);
  CHECK(classical_order(t) == 2);
  CHECK_FALSE(is_stiffly_accurate(t, kTol));
  CHECK(is_stiffly_accurate(t, kTol, true));

  // Execution order: the forward sweep (stages 1-2 of each partition in
  // increasing partition order), then the reversed sweep.
  const auto p = find_imim_permutation(t);
  REQUIRE(p);
  const std::vector<StageRef> expected = {{0, 0}, {0, 1}, {1, 0}, {1, 1},
                                          {1, 2}, {1, 3}, {0, 2}, {0, 3}};
  CHECK(p->order == expected);
}

TEST_CASE("parallel Yanenko") {
  CHECK(classical_order(yanenko_parallel<double>(2)) == 2);
  const auto t = yanenko_parallel<double>(3);
  // Reversed-sweep stages never see forward-sweep stages.
  for (Index q = 0; q < 3; ++q)
    for (Index m = 0; m < 3; ++m) {
      const auto& A = t.block(q, m);
      CHECK(A.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);
      CHECK(A.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
    }
  CHECK(classical_order(yanenko_parallel<double>(1)) == 2);
}

TEST_CASE("trapezoidal splitting") {
  const auto t = trapezoidal_splitting<double>(2);
  CHECK(classical_order(t) == 2);
  CHECK_FALSE(is_internally_consistent(t, kTol));
  CHECK_FALSE(is_stiffly_accurate(t, kTol));
  CHECK(is_stiffly_accurate(t, kTol, true));
  CHECK(classical_order(trapezoidal_splitting<double>(1)) == 2);
}

TEST_CASE("Douglas order rules") {
  CHECK(order_of(douglas<double>(2, 0.5, false)) == 2);
  CHECK(order_of(douglas<double>(2, 0.5, true)) == 1);
  CHECK(order_of(douglas<double>(2, 1.0, false)) == 1);
  CHECK(order_of(douglas<double>(3, 0.5, false)) == 2);
  const auto t = assemble_structured(douglas<double>(2, 0.5, false));
  CHECK(is_internally_consistent(t, kTol));
  CHECK(is_stiffly_accurate(t, kTol));
}

TEST_CASE("modified Douglas variants") {
  CHECK(order_of(douglas_modified_first<double>(2, 0.5)) == 2);
  CHECK(order_of(douglas_modified_first<double>(2, 0.3)) == 1);
  CHECK(is_stiffly_accurate(assemble_structured(douglas_modified_first<double>(2, 0.5)), kTol));

  CHECK(order_of(douglas_modified_last<double>(2, 0.5)) == 2);
  for (double theta : {0.3, 0.5, 1.0})
    CHECK_FALSE(is_stiffly_accurate(assemble_structured(douglas_modified_last<double>(2, theta)), kTol));
}

TEST_CASE("modified Craig-Sneyd order rule") {
  CHECK(order_of(modified_craig_sneyd<double>(2, 0.5, 0.5, 0.0)) == 2);
  CHECK(order_of(modified_craig_sneyd<double>(2, 1.0 / 3, 1.0 / 3, 1.0 / 6)) == 2);
  CHECK(order_of(modified_craig_sneyd<double>(2, 1.0 / 3, 0.5, 1.0 / 6)) == 1);
  CHECK(order_of(modified_craig_sneyd<double>(2, 1.0 / 3, 1.0 / 3, 0.25)) == 1);
}

TEST_CASE("Hundsdorfer-Verwer order rule") {
  CHECK(order_of(hundsdorfer_verwer<double>(2, 0.75, 0.5)) == 2);
  CHECK(order_of(hundsdorfer_verwer<double>(2, 0.75, 0.25)) == 1);
  CHECK(is_stiffly_accurate(assemble_structured(hundsdorfer_verwer<double>(2, 0.75, 0.5)), kTol));
}

TEST_CASE("Strang splitting") {
  CHECK(classical_order(strang(implicit_euler<double>(), 2)) == 1);
  CHECK(classical_order(strang(implicit_midpoint<double>(), 2)) == 2);
  CHECK(classical_order(strang(sdirk34<double>(), 3)) == 2);
  CHECK(classical_order(strang(gauss2<double>(), 2)) == 2);

  const auto t = strang(implicit_midpoint<double>(), 1);
  const std::complex<double> z(-0.7, 0.4);
  const auto half = (1.0 + z / 4.0) / (1.0 - z / 4.0);
  CHECK(std::abs(stability_value(t, {z}) - half * half) < 1e-14);

  RkTableau<double> bad = implicit_midpoint<double>();
  bad.c(0) = 0.3;
  CHECK_THROWS_AS(strang(bad, 2), DimensionError);
}

TEST_CASE("Yoshida triple jump") {
  const auto coef = yoshida4_coefficients<double>();
  CHECK(coef.theta == doctest::Approx(1.35121).epsilon(1e-5));
  CHECK(coef.alpha[0] == doctest::Approx(coef.theta / 2));

  const auto t = yoshida4(gauss2<double>());
  CHECK(t.weights(0).sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.weights(1).sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(classical_order(t) == 4);
  CHECK(classical_order(yoshida4(sdirk34<double>())) == 4);
  CHECK(classical_order(yoshida4(implicit_midpoint<double>())) == 2);
  CHECK(classical_order(yoshida4(implicit_euler<double>())) == 1);
  CHECK(imim(yoshida4(sdirk34<double>())));
  CHECK_THROWS_AS(yoshida4(sdirk34<double>(), 3), std::invalid_argument);
}

TEST_CASE("FSRK encoding of LOD backward Euler") {
  for (Index N = 1; N <= 3; ++N) {
    FsrkSpec<double> spec;
    spec.num_dimensions = N;
    for (Index j = 0; j < N; ++j) spec.dimension_of_stage.push_back(j + 1);
    spec.nonstiff = MatrixXd::Zero(N, N);
    spec.nonstiff_weights = VectorXd::Zero(N);
    spec.abscissae = VectorXd::Ones(N);
    for (Index m = 0; m < N; ++m) {
      MatrixXd a = MatrixXd::Zero(N, N);
      a.col(m).tail(N - m).setOnes();
      spec.implicit.push_back(a);
      VectorXd b = VectorXd::Zero(N);
      b(m) = 1;
      spec.weights.push_back(b);
    }
    const auto g = fsrk_to_gark(spec);
    const auto lod = assemble_structured(lod_backward_euler<double>(N));
    CHECK(g.num_stiff_partitions() == N);
    Index total = 0;
    for (Index q = 0; q <= N; ++q) total += q == 0 ? 0 : g.stage_count(q);
    CHECK(total == N);
    for (Index q = 0; q < N; ++q) {
      CHECK(g.weights(q + 1) == lod.weights(q));
      for (Index m = 0; m < N; ++m) CHECK(g.block(q + 1, m + 1) == lod.block(q, m));
    }

    const auto back = gark_to_fsrk(g, spec.dimension_of_stage);
    CHECK(back.nonstiff == spec.nonstiff);
    CHECK(back.abscissae == spec.abscissae);
    for (Index m = 0; m < N; ++m) {
      CHECK(back.implicit[m] == spec.implicit[m]);
      CHECK(back.weights[m] == spec.weights[m]);
    }
  }
}

TEST_CASE("FSRK with one stage is the underlying method") {
  FsrkSpec<double> spec;
  spec.num_dimensions = 1;
  spec.dimension_of_stage = {1};
  spec.implicit = {MatrixXd::Constant(1, 1, 0.5)};
  spec.weights = {VectorXd::Ones(1)};
  spec.nonstiff = MatrixXd::Zero(1, 1);
  spec.nonstiff_weights = VectorXd::Ones(1);
  spec.abscissae = VectorXd::Constant(1, 0.5);
  const auto g = fsrk_to_gark(spec);
  CHECK(g.block(1, 1)(0, 0) == 0.5);
  CHECK(g.weights(1)(0) == 1.0);
  CHECK(classical_order(g) == 1);
}

TEST_CASE("FSRK validation") {
  FsrkSpec<double> spec;
  spec.num_dimensions = 2;
  spec.dimension_of_stage = {1, 1};
  spec.implicit = {MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)};
  spec.weights = {VectorXd::Ones(2), VectorXd::Zero(2)};
  spec.nonstiff = MatrixXd::Zero(2, 2);
  spec.nonstiff_weights = VectorXd::Zero(2);
  spec.abscissae = VectorXd::Ones(2);
  CHECK_THROWS_AS(fsrk_to_gark(spec), std::invalid_argument);

  spec.dimension_of_stage = {1, 2};
  spec.implicit[1](0, 0) = 0.5;
  CHECK_THROWS_AS(fsrk_to_gark(spec), std::invalid_argument);
}

TEST_CASE("ADI-GARK3 coefficients") {
  const double g = adi_gark3_gamma<double>();
  CHECK(std::abs(6 * g * g * g - 18 * g * g + 9 * g - 1) < 1e-15);
  CHECK(g == doctest::Approx(0.43586652150845900).epsilon(1e-16));

  for (auto mode : {AssemblyMode::Adi, AssemblyMode::ParallelAdi}) {
    const auto st = adi_gark3<double>(mode);
    CHECK(order_of(st) == 3);
    CHECK(st.b == VectorXd(st.diag.row(3).transpose()));
    CHECK(st.c(1) == doctest::Approx(2 * g));
    CHECK(st.c(2) == doctest::Approx((g + 2) / 4));
    CHECK(st.c(3) == 1.0);
    CHECK((st.diag.rowwise().sum() - st.c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((st.upper.rowwise().sum() - st.c).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(adi_gark3<double>(AssemblyMode::Adi).lower == adi_gark3<double>(AssemblyMode::Adi).diag);
  CHECK(adi_gark3<double>(AssemblyMode::ParallelAdi).lower ==
        adi_gark3<double>(AssemblyMode::ParallelAdi).upper);
  CHECK_THROWS_AS(adi_gark3<double>(AssemblyMode::General), std::invalid_argument);
}

TEST_CASE("ADI-GARK4 coefficients") {
  for (auto mode : {AssemblyMode::Adi, AssemblyMode::ParallelAdi}) {
    const auto st = adi_gark4<double>(mode);
    CHECK(order_of(st) == 4);
    const auto cr = coupling_residuals_special(st);
    for (double r : cr.residual) CHECK(std::abs(r) < 1e-12);
    CHECK(cr.internally_consistent);
  }
  const auto st = adi_gark4<double>();
  CHECK(rk_order(st.diag, st.b) == 4);
  CHECK(rk_order(st.upper, st.b) == 4);
  CHECK((st.upper.rowwise().sum() - st.c).cwiseAbs().maxCoeff() < 1e-12);
  for (Index i = 1; i < 6; ++i) CHECK(st.diag(i, i) == 0.25);
  CHECK(st.c(2) == doctest::Approx((2 - std::sqrt(2.0)) / 4));
  CHECK(st.c(4) == doctest::Approx(26.0 / 25));
}

TEST_CASE("every constructor is IMIM with matching structure") {
  const std::vector<StructuredTableau<double>> structured = {
      lod_backward_euler<double>(3),
      douglas<double>(3, 0.5, true),
      douglas_modified_first<double>(2, 0.5),
      douglas_modified_last<double>(2, 0.5),
      modified_craig_sneyd<double>(3, 0.5, 0.5, 0.0),
      hundsdorfer_verwer<double>(2, 0.75, 0.5),
      adi_gark3<double>(AssemblyMode::Adi, 3),
      adi_gark3<double>(AssemblyMode::ParallelAdi, 3),
      adi_gark4<double>(AssemblyMode::Adi, 2),
      adi_gark4<double>(AssemblyMode::ParallelAdi, 3),
  };
  for (const auto& st : structured) {
    CAPTURE(st.name);
    CHECK(imim(assemble_structured(st)));
    if (st.mode == AssemblyMode::Adi) CHECK(st.lower == st.diag);
    if (st.mode == AssemblyMode::ParallelAdi) CHECK(st.lower == st.upper);
  }
  const std::vector<GarkTableau<double>> general = {
      yanenko_lod_cn<double>(3), yanenko_symmetric<double>(3), yanenko_parallel<double>(3),
      trapezoidal_splitting<double>(3), strang(sdirk34<double>(), 3), yoshida4(sdirk34<double>())};
  for (const auto& t : general) {
    CAPTURE(t.name);
    CHECK(imim(t));
  }
}
