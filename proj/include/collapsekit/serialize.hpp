// Lossless serialization. Probabilities and effect values are JSON strings
// ("3/4", "0.75"), never JSON numbers, so parse(emit(x)) == x holds exactly.
// Report emitters additionally render display decimals, which parsers
// ignore.
#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collapsekit/collapsibility.hpp"
#include "collapsekit/identification.hpp"
#include "collapsekit/model.hpp"
#include "collapsekit/scenario.hpp"

namespace collapsekit {

// ordered_json keeps emission field order deterministic.
using Json = nlohmann::ordered_json;

Json rational_json(const Rational& value);
Rational rational_from_json(const Json& j, const std::string& context);

// {"strata":[{"label","prevalence","joint":{"q00","q01","q10","q11"}}]};
// the shorthand {"risk0","risk1"} instead of "joint" expands to the
// independent coupling.
Json population_to_json(const CounterfactualPopulation& population);
CounterfactualPopulation population_from_json(const Json& j,
                                              std::vector<std::string>* warnings = nullptr);

// {"strata":[{"label","prevalence","pA","r0":str|null,"r1":str|null}]}
Json table_to_json(const ObservationalTable& table);
ObservationalTable table_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);

// {"pi":[{"label","y0","y1","p"}]}; shorthands: {"pi":"1/2"} for a global
// constant and {"label","p"} entries for per-stratum constants.
Json mechanism_to_json(const AssignmentMechanism& mechanism);
AssignmentMechanism mechanism_from_json(const Json& j);

Json scenario_to_json(const ScenarioSpec& scenario);
ScenarioSpec scenario_from_json(const Json& j);

Json weight_vector_to_json(const WeightVector& weights);
WeightVector weight_vector_from_json(const Json& j);

Json collapsibility_report_to_json(const CollapsibilityReport& report, int decimals);
CollapsibilityReport collapsibility_report_from_json(const Json& j);

Json feasibility_result_to_json(const FeasibilityResult& result);
FeasibilityResult feasibility_result_from_json(const Json& j);

Json newman_weights_to_json(const NewmanWeights& weights);
NewmanWeights newman_weights_from_json(const Json& j);

Json def_equivalence_to_json(const DefEquivalenceReport& report);
DefEquivalenceReport def_equivalence_from_json(const Json& j);

// CSV, one row per stratum. Headers:
//   label,prevalence,risk0,risk1   counterfactual population (independent coupling)
//   label,prevalence,pA,r0,r1      observational table (empty cell = absent)
//   label,prevalence,pY            outcome-by-stratum list
CounterfactualPopulation population_from_csv(std::istream& in,
                                             std::vector<std::string>* warnings = nullptr);
ObservationalTable table_from_csv(std::istream& in, std::vector<std::string>* warnings = nullptr);
std::vector<OutcomeStratum> outcome_strata_from_csv(std::istream& in);

Json outcome_strata_to_json(const std::vector<OutcomeStratum>& strata);
std::vector<OutcomeStratum> outcome_strata_from_json(const Json& j);

// Sniffs JSON vs CSV and the object type. A scenario fills population and
// mechanism as well.
struct AnyInput {
  std::optional<CounterfactualPopulation> population;
  std::optional<ObservationalTable> table;
  std::optional<AssignmentMechanism> mechanism;
  std::optional<ScenarioSpec> scenario;
  std::optional<std::vector<OutcomeStratum>> outcome;
  std::vector<std::string> warnings;
};

AnyInput parse_input_text(const std::string& text);

}  // namespace collapsekit
