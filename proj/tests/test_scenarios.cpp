#include <doctest.h>

#include <stdexcept>

#include "ssn/scenarios.hpp"

using namespace ssn;

TEST_SUITE("scenarios") {
  TEST_CASE("every built-in example reproduces") {
    for (const auto& id : scenario_ids()) {
      const auto r = reproduce(id);
      INFO(id);
      for (const auto& f : r.failures) INFO(f);
      CHECK(r.passed);
      CHECK(r.report["example"] == id);
      CHECK_FALSE(r.report["checks"].empty());
    }
  }

  TEST_CASE("reproduction is deterministic for a seed") {
    CHECK(reproduce("exam-4-3-cone", 3).report.dump() == reproduce("exam-4-3-cone", 3).report.dump());
  }

  TEST_CASE("unknown example ids are rejected") { CHECK_THROWS_AS(reproduce("exam-1-1"), std::invalid_argument); }

  TEST_CASE("cusp Hessian table appears in the report") {
    const auto r = reproduce("exam-2-12");
    const auto& rows = r.report["data"]["sequence"];
    REQUIRE(rows.size() == 4);
    CHECK(rows[1]["k"] == 10);
    CHECK(rows[1]["hessian"][0][0].get<double>() == doctest::Approx(0.2));
    CHECK(rows[1]["hessian"][0][1].get<double>() == doctest::Approx(2e-3));
  }
}
