#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "gark/order_conditions.hpp"
#include "gark/registry.hpp"
#include "gark/tableau_io.hpp"

using namespace gark;

TEST_CASE("catalog contents") {
  for (const char* name : {"lod-be", "adi-gark4", "yoshida4", "douglas", "mcs", "hv", "strang"})
    CHECK(is_registered(name));
  CHECK_FALSE(is_registered("rk4"));
  CHECK(method_catalog().size() == 14);
  CHECK_THROWS_AS(build_method("nope"), UnknownMethodError);
  CHECK_THROWS_AS(base_method("nope"), UnknownMethodError);
  CHECK_THROWS_AS(parse_mode("serial"), std::invalid_argument);
}

TEST_CASE("every catalog method meets its documented order") {
  for (const auto& e : method_catalog()) {
    const auto m = build_method(e.name);
    CAPTURE(e.name);
    CHECK(classical_order(m.tableau) == m.documented_order);
    CHECK(find_imim_permutation(m.tableau).has_value());
  }
}

TEST_CASE("parameter dependent orders") {
  MethodParams p;
  p.theta = 0.5;
  p.f0 = true;
  CHECK(build_method("douglas", p).documented_order == 1);
  CHECK(classical_order(build_method("douglas", p).tableau) == 1);

  MethodParams mcs;
  mcs.theta = 0.5;
  mcs.sigma = 0.5;
  mcs.mu = 0.0;
  CHECK(classical_order(build_method("mcs", mcs).tableau) == 2);
  mcs.mu = 0.1;
  CHECK(classical_order(build_method("mcs", mcs).tableau) == 1);
  CHECK(build_method("mcs", mcs).documented_order == 1);

  MethodParams hv;
  hv.mu = 0.3;
  CHECK(classical_order(build_method("hv", hv).tableau) == 1);

  MethodParams y;
  y.base = "gauss2";
  CHECK(classical_order(build_method("yoshida4", y).tableau) == 4);
  y.base = "implicit-euler";
  CHECK(build_method("strang", y).documented_order == 1);

  MethodParams par;
  par.mode = AssemblyMode::ParallelAdi;
  par.N = 3;
  const auto m = build_method("adi-gark4", par);
  REQUIRE(m.structured);
  CHECK(m.structured->mode == AssemblyMode::ParallelAdi);
  CHECK(m.tableau.num_partitions() == 3);
}

TEST_CASE("JSON round trip is exact") {
  MethodParams f0, three;
  f0.f0 = true;
  three.N = 3;
  for (const auto& t : {build_method("adi-gark4").tableau, build_method("yanenko", three).tableau,
                        build_method("douglas", f0).tableau}) {
    const auto back = tableau_from_json(tableau_to_json(t));
    CHECK(back.name == t.name);
    CHECK(back.has_nonstiff_partition() == t.has_nonstiff_partition());
    REQUIRE(back.num_partitions() == t.num_partitions());
    for (Index q = 0; q < t.num_partitions(); ++q) {
      CHECK(back.weights(q) == t.weights(q));
      CHECK(back.stage_times(q) == t.stage_times(q));
      for (Index m = 0; m < t.num_partitions(); ++m) CHECK(back.block(q, m) == t.block(q, m));
    }
  }
}

TEST_CASE("JSON files") {
  const auto path = (std::filesystem::temp_directory_path() / "gark_roundtrip.json").string();
  const auto t = build_method("hv").tableau;
  write_tableau_file(t, path);
  const auto back = read_tableau_file(path);
  CHECK(back.flatten().A == t.flatten().A);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_tableau_file(path), std::invalid_argument);
}

TEST_CASE("malformed JSON") {
  CHECK_THROWS_AS(tableau_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(tableau_from_json(R"({"num_partitions": 1, "stage_counts": [1],
      "blocks": {"1,1": [[1, 2]]}, "weights": {"1": [1]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(tableau_from_json(R"({"num_partitions": 0, "stage_counts": [],
      "blocks": {}, "weights": {}})"),
                  std::invalid_argument);
}
