// Built-in analysis scenarios: a counterfactual population paired with the
// assignment mechanism that generated the observed data.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "collapsekit/model.hpp"

namespace collapsekit {

struct ScenarioSpec {
  std::string name;
  std::string description;
  CounterfactualPopulation population;
  AssignmentMechanism mechanism;
};

// Built-ins:
//   table1                  two-sex randomized trial with equal stratum odds
//                           ratios (3) but a different marginal odds ratio
//   no-effect-modification  two strata sharing the same risk difference
//   confounded-demo         assignment depends on the untreated outcome, so
//                           conditional exchangeability fails
// Each scenario's defining property is asserted at construction time.
// Throws Error(UnknownScenario) for anything else.
ScenarioSpec builtin_scenario(std::string_view name);

std::vector<std::string> builtin_scenario_names();

}  // namespace collapsekit
