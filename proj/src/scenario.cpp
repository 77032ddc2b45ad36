#include "collapsekit/scenario.hpp"

#include <stdexcept>

#include "collapsekit/collapsibility.hpp"

namespace collapsekit {

namespace {

CounterfactualStratum stratum_from_risks(std::string label, const Rational& prevalence,
                                         const Rational& risk0, const Rational& risk1) {
  return CounterfactualStratum{
      std::move(label), Probability(prevalence),
      JointDistribution::independent(Probability(risk0), Probability(risk1))};
}

void require(bool condition, const char* what) {
  if (!condition) throw std::logic_error(std::string("built-in scenario broken: ") + what);
}

ScenarioSpec make_table1() {
  auto population = CounterfactualPopulation::validate({
      stratum_from_risks("men", Rational(1, 4), Rational(1, 2), Rational(3, 4)),
      stratum_from_risks("women", Rational(3, 4), Rational(1, 4), Rational(1, 2)),
  });
  ScenarioSpec spec{
      "table1",
      "Randomized trial stratified by sex: the odds ratio is 3 in every "
      "stratum yet differs marginally, so no weighted average of the "
      "stratum odds ratios can recover the marginal one.",
      std::move(population),
      AssignmentMechanism::constant(Probability(Rational(1, 2))),
  };
  const auto effects = stratum_effects(EffectMeasureKind::OddsRatio, spec.population);
  for (const auto& e : effects) require(e.value == Rational(3), "stratum odds ratios must be 3");
  require(marginal_effect(EffectMeasureKind::OddsRatio, spec.population) == Rational(99, 35),
          "marginal odds ratio must be 99/35");
  return spec;
}

ScenarioSpec make_no_effect_modification() {
  auto population = CounterfactualPopulation::validate({
      stratum_from_risks("s1", Rational(1, 2), Rational(1, 5), Rational(3, 10)),
      stratum_from_risks("s2", Rational(1, 2), Rational(2, 5), Rational(1, 2)),
  });
  ScenarioSpec spec{
      "no-effect-modification",
      "Two strata with the same risk difference: the marginal risk "
      "difference equals the shared stratum value under any weights.",
      std::move(population),
      AssignmentMechanism::constant(Probability(Rational(1, 2))),
  };
  const auto effects = stratum_effects(EffectMeasureKind::RiskDifference, spec.population);
  require(effects[0].value == effects[1].value, "stratum risk differences must be equal");
  require(marginal_effect(EffectMeasureKind::RiskDifference, spec.population) ==
              *effects[0].value,
          "marginal must equal the common stratum risk difference");
  return spec;
}

ScenarioSpec make_confounded_demo() {
  auto population = CounterfactualPopulation::validate({
      stratum_from_risks("s1", Rational(1, 2), Rational(1, 5), Rational(2, 5)),
      stratum_from_risks("s2", Rational(1, 2), Rational(2, 5), Rational(2, 5)),
  });
  // Assignment favors exposure for those who would fall ill untreated.
  AssignmentMechanism mechanism;
  for (const auto& stratum : population.strata()) {
    for (int y1 = 0; y1 <= 1; ++y1) {
      mechanism.set(stratum.label, 0, y1, Probability(Rational(1, 4)));
      mechanism.set(stratum.label, 1, y1, Probability(Rational(3, 4)));
    }
  }
  ScenarioSpec spec{
      "confounded-demo",
      "Assignment probability depends on the untreated counterfactual "
      "outcome: exchangeability fails and associational measures drift "
      "away from their causal counterparts.",
      std::move(population),
      std::move(mechanism),
  };
  require(!check_conditional_exchangeability(spec.population, spec.mechanism).a0,
          "conditional exchangeability for a=0 must fail");
  return spec;
}

}  // namespace

ScenarioSpec builtin_scenario(std::string_view name) {
  if (name == "table1") return make_table1();
  if (name == "no-effect-modification") return make_no_effect_modification();
  if (name == "confounded-demo") return make_confounded_demo();
  fail(ErrorCode::UnknownScenario,
       "unknown scenario '" + std::string(name) +
           "' (available: table1, no-effect-modification, confounded-demo)");
}

std::vector<std::string> builtin_scenario_names() {
  return {"table1", "no-effect-modification", "confounded-demo"};
}

}  // namespace collapsekit
