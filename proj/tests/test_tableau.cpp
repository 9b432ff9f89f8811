#include "doctest.h"
#include "gark/methods.hpp"
#include "gark/tableau.hpp"

using namespace gark;

namespace {

constexpr double kTol = 1e-12;

GarkTableau<double> two_by_two() {
  Matrix<double> a11(2, 2), a12(2, 2), a21(2, 2), a22(2, 2);
  a11 << 0, 0, 0.5, 0.5;
  a12 << 0.1, 0.2, 0.3, 0.4;
  a21 << 0.5, 0.6, 0.7, 0.8;
  a22 << 1, 0, 0.25, 0.75;
  Vector<double> b1(2), b2(2);
  b1 << 0.5, 0.5;
  b2 << 0.25, 0.75;
  return GarkTableau<double>({a11, a12, a21, a22}, {b1, b2});
}

}  // namespace

TEST_CASE("constructor validates block shapes") {
  Matrix<double> a = Matrix<double>::Zero(2, 2);
  Matrix<double> bad = Matrix<double>::Zero(1, 2);
  Vector<double> b = Vector<double>::Constant(2, 0.5);
  CHECK_THROWS_AS(GarkTableau<double>({a, bad, a, a}, {b, b}), DimensionError);
  CHECK_THROWS_AS(GarkTableau<double>({a, a, a}, {b, b}), DimensionError);
  CHECK_NOTHROW(GarkTableau<double>({a, a, a, a}, {b, b}));
}

TEST_CASE("abscissae are block row sums") {
  const auto t = two_by_two();
  CHECK(t.abscissae(0, 1)(0) == doctest::Approx(0.3));
  CHECK(t.abscissae(1, 0)(1) == doctest::Approx(1.5));
  CHECK(t.stage_times(1)(0) == doctest::Approx(1.0));
  CHECK(t.total_stages() == 4);
  CHECK(t.global_index({1, 1}) == 3);
  CHECK(t.stage_at(2) == StageRef{1, 0});
}

TEST_CASE("assemble_structured with one partition keeps the diagonal block") {
  StructuredTableau<double> st;
  st.num_partitions = 1;
  st.lower = Matrix<double>::Zero(2, 2);
  st.diag.resize(2, 2);
  st.diag << 0, 0, 0.5, 0.5;
  st.upper = Matrix<double>::Zero(2, 2);
  st.b = Vector<double>::Constant(2, 0.5);
  st.c.resize(2);
  st.c << 0, 1;
  st.mode = AssemblyMode::General;
  const auto t = assemble_structured(st);
  CHECK(t.num_partitions() == 1);
  CHECK(t.block(0, 0) == st.diag);
  CHECK(t.weights(0) == st.b);
}

TEST_CASE("LOD backward Euler assembles to ones on and below the block diagonal") {
  const auto t = assemble_structured(lod_backward_euler<double>(3));
  for (Index q = 0; q < 3; ++q)
    for (Index m = 0; m < 3; ++m) CHECK(t.block(q, m)(0, 0) == (m <= q ? 1.0 : 0.0));
}

TEST_CASE("Douglas with f0 prepends the nonstiff partition") {
  const auto t = assemble_structured(douglas<double>(2, 0.5, true));
  REQUIRE(t.has_nonstiff_partition());
  CHECK(t.num_partitions() == 3);
  CHECK(t.label(0) == 0);
  CHECK(t.label(2) == 2);
  for (Index q = 1; q <= 2; ++q) {
    CHECK(t.block(q, 0)(0, 0) == 0.0);
    CHECK(t.block(q, 0)(1, 0) == 1.0);
  }
  CHECK(is_internally_consistent(t, kTol));
}

TEST_CASE("structured validation rejects broken triangularity") {
  auto st = douglas<double>(2, 0.5, false);
  st.upper(0, 0) = 0.1;
  CHECK_THROWS_AS(assemble_structured(st), std::invalid_argument);
  auto st2 = douglas<double>(2, 0.5, false);
  st2.diag(0, 1) = 0.1;
  CHECK_THROWS_AS(assemble_structured(st2), std::invalid_argument);
}

TEST_CASE("identity permutation leaves the flat tableau unchanged") {
  const auto t = two_by_two();
  const auto flat = t.flatten();
  const auto p = permute(t, identity_permutation(t));
  CHECK(p.A == flat.A);
  CHECK(p.b == flat.b);
}

TEST_CASE("swapping stages permutes rows and columns and inverts exactly") {
  const auto t = two_by_two();
  const auto flat = t.flatten();
  const std::vector<Index> order{0, 2, 1, 3};
  const auto p = permute(flat, std::span<const Index>(order));
  CHECK(p.A(1, 2) == flat.A(2, 1));
  CHECK(p.A(1, 1) == flat.A(2, 2));
  CHECK(p.b(1) == flat.b(2));
  const auto inv = invert(std::span<const Index>(order));
  const auto back = permute(p, std::span<const Index>(inv));
  CHECK(back.A == flat.A);
  CHECK(back.b == flat.b);
}

TEST_CASE("permutations must be bijections") {
  const auto t = two_by_two();
  StagePermutation repeated{{{0, 0}, {0, 0}, {1, 0}, {1, 1}}};
  StagePermutation shorter{{{0, 0}, {0, 1}, {1, 0}}};
  StagePermutation missing{{{0, 0}, {0, 1}, {1, 0}, {2, 0}}};
  CHECK_THROWS_AS(to_indices(t, repeated), DimensionError);
  CHECK_THROWS_AS(to_indices(t, shorter), DimensionError);
  CHECK_THROWS_AS(to_indices(t, missing), DimensionError);
}

TEST_CASE("lower triangular tableau gets the identity order") {
  const auto t = assemble_structured(lod_backward_euler<double>(3));
  const auto p = find_imim_permutation(t);
  REQUIRE(p);
  CHECK(p->order == identity_permutation(t).order);
}

TEST_CASE("ADI order 3 yields the vec-permutation") {
  const auto st = adi_gark3<double>(AssemblyMode::Adi, 2);
  const auto t = assemble_structured(st);
  const auto p = find_imim_permutation(t);
  REQUIRE(p);
  CHECK(p->order == vec_permutation(t).order);

  const auto perm = permute(t, *p);
  CHECK(is_lower_triangular(perm.A, 1e-15));
  // Level blocks of the permuted form: a^D on the diagonal, a^L below, a^U above.
  const Index N = 2;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      CHECK(perm.A(i * N, j * N) == st.diag(i, j));
      CHECK(perm.A(i * N + 1, j * N) == st.lower(i, j));
      CHECK(perm.A(i * N, j * N + 1) == st.upper(i, j));
    }
}

TEST_CASE("fully coupled Gauss blocks admit no IMIM order") {
  const auto g = gauss2<double>();
  const GarkTableau<double> t({g.A, g.A, g.A, g.A}, {g.b, g.b});
  CHECK_FALSE(find_imim_permutation(t).has_value());

  const Matrix<double> zero = Matrix<double>::Zero(2, 2);
  const GarkTableau<double> lower({g.A, zero, g.A, g.A}, {g.b, g.b});
  CHECK_FALSE(find_imim_permutation(lower).has_value());
}

TEST_CASE("regroup after a permutation reproduces the tableau") {
  const auto t = assemble_structured(adi_gark4<double>(AssemblyMode::Adi, 3));
  const auto p = vec_permutation(t);
  const auto back = regroup(permute(t, p), t, p);
  for (Index q = 0; q < 3; ++q) {
    CHECK(back.weights(q) == t.weights(q));
    for (Index m = 0; m < 3; ++m) CHECK(back.block(q, m) == t.block(q, m));
  }
}

TEST_CASE("internal consistency") {
  CHECK(is_internally_consistent(assemble_structured(douglas<double>(3, 0.5, false)), kTol));
  CHECK_FALSE(is_internally_consistent(assemble_structured(lod_backward_euler<double>(2)), kTol));
  CHECK(is_internally_consistent(assemble_structured(lod_backward_euler<double>(1)), kTol));
  CHECK_FALSE(is_internally_consistent(two_by_two(), kTol));
}

TEST_CASE("stiff accuracy classification") {
  CHECK(is_stiffly_accurate(assemble_structured(lod_backward_euler<double>(2)), kTol));
  CHECK(is_stiffly_accurate(assemble_structured(douglas<double>(2, 0.5, false)), kTol));
  CHECK_FALSE(is_stiffly_accurate(assemble_structured(douglas_modified_last<double>(2, 0.5)), kTol, true));

  const auto trap = trapezoidal_splitting<double>(2);
  CHECK_FALSE(is_stiffly_accurate(trap, kTol));
  CHECK(is_stiffly_accurate(trap, kTol, true));

  const auto adi = adi_gark3<double>(AssemblyMode::Adi, 2);
  CHECK(is_stiffly_accurate(assemble_structured(adi), kTol) ==
        ((adi.b.transpose() - adi.diag.row(adi.stages() - 1)).cwiseAbs().maxCoeff() < kTol));
}

TEST_CASE("long double instantiation") {
  const auto t = assemble_structured(adi_gark3<long double>(AssemblyMode::Adi, 2));
  CHECK(find_imim_permutation(t).has_value());
  CHECK(is_internally_consistent(t, 1e-15L));
  const auto d = t.cast<double>();
  CHECK(d.total_stages() == t.total_stages());
}
