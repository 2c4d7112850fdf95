#include <cstdio>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "mmot/constructors.hpp"
#include "mmot/errors.hpp"
#include "mmot/json_io.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"

using namespace mmot;
using nlohmann::json;

TEST_CASE("measure JSON roundtrip") {
  const auto mu = build_counterexample_measure(1, 2);
  const auto restored = measure_from_json(measure_to_json(mu));
  CHECK(restored.same_atoms(mu));
}

TEST_CASE("measure JSON rejects bad payloads") {
  CHECK_THROWS_AS(measure_from_json(json{{"d", 1}}), InvalidInput);
  const json off = {{"d", 1}, {"points", {{0.0}, {1.0}}}, {"weights", {0.5, 0.6}}};
  CHECK_THROWS_AS(measure_from_json(off), InvalidInput);
  // Residue within 1e-9 is renormalized, not rejected.
  const json close = {{"d", 1}, {"points", {{0.0}, {1.0}}}, {"weights", {0.5, 0.5 + 4e-10}}};
  CHECK_NOTHROW(measure_from_json(close));
}

TEST_CASE("plan JSON roundtrip") {
  const SparsePlan g1 = gamma1(1, 1);
  const SparsePlan restored = plan_from_json(plan_to_json(g1));
  REQUIRE(restored.atoms().size() == g1.atoms().size());
  for (std::size_t a = 0; a < g1.atoms().size(); ++a) {
    CHECK(restored.atoms()[a].idx == g1.atoms()[a].idx);
    CHECK(restored.atoms()[a].mass == g1.atoms()[a].mass);
  }
}

TEST_CASE("plan CSV layout") {
  const SparsePlan g0 = gamma0(1, 1);
  const std::string csv = plan_to_csv(g0);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "i1,i2,i3,x1_1,x2_1,x3_1,mass");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == g0.atoms().size());
}

TEST_CASE("cost kind names") {
  CHECK(cost_kind_from_name("attractive") == CostKind::Attractive);
  CHECK(cost_kind_from_name("repulsive") == CostKind::Repulsive);
  CHECK(cost_kind_from_name("sum-square") == CostKind::SumSquare);
  CHECK(cost_kind_name(CostKind::SumSquare) == "sum-square");
  CHECK_THROWS_AS(cost_kind_from_name("quartic"), InvalidInput);
}

TEST_CASE("file IO and hashing") {
  const std::string path = "mmot_io_test.tmp";
  write_file(path, "payload");
  CHECK(read_file(path) == "payload");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_file("definitely/not/here.json"), std::ios_base::failure);

  const std::string h1 = content_hash("payload");
  CHECK(h1.rfind("fnv1a:", 0) == 0);
  CHECK(h1 == content_hash("payload"));
  CHECK(h1 != content_hash("payload2"));
}
