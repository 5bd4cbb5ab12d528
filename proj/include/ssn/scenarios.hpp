#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ssn/residual_maps.hpp"

namespace ssn {

/// Embedded worked examples: exam-2-11, exam-2-12, exam-4-2, exam-4-3-cone.
std::vector<std::string> scenario_ids();

struct ScenarioResult {
  nlohmann::json report;
  bool passed = true;
  std::vector<std::string> failures;
};

/// Runs a scenario and checks its known facts. Throws
/// std::invalid_argument for an unknown id.
ScenarioResult reproduce(const std::string& id, std::uint64_t seed = 0);

/// Problem instances shared with the tests.
CompositeProblem example_4_2_problem();
CompositeProblem cone_example_problem();
/// f = 1/2 (c x1^2 + x2^2) with the cusp support function, tau = 1.
CompositeProblem cusp_problem(double c);

}  // namespace ssn
