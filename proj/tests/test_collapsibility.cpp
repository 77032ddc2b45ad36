#include "collapsekit/collapsibility.hpp"

#include <doctest.h>

#include <functional>

#include "collapsekit/random_gen.hpp"
#include "collapsekit/serialize.hpp"
#include "test_support.hpp"

using namespace collapsekit;
using namespace collapsekit::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ParseError;
}

std::vector<Rational> weights_of(const WeightVector& weights) {
  std::vector<Rational> out;
  for (const auto& e : weights.entries()) out.push_back(e.weight);
  return out;
}

ObservationalTable p2_randomized() {
  return apply_assignment(p2(), AssignmentMechanism::constant(Probability(rat("1/2"))));
}

}  // namespace

TEST_CASE("weight vector validation") {
  CHECK_THROWS_AS(WeightVector::validate({}), Error);
  CHECK(code_of([] { WeightVector::validate({{"a", 0}, {"b", 0}}); }) ==
        ErrorCode::AllZeroWeights);
  CHECK(code_of([] { WeightVector::validate({{"a", rat("-1/2")}, {"b", 1}}); }) ==
        ErrorCode::InputMismatch);
  CHECK(code_of([] { WeightVector::validate({{"a", 1}, {"a", 1}}); }) ==
        ErrorCode::DuplicateLabelError);

  const auto weights = WeightVector::validate({{"a", rat("1/2")}, {"b", rat("3/2")}});
  CHECK(weights.total() == 2);
  CHECK(weights_of(weights.normalized()) == std::vector<Rational>{rat("1/4"), rat("3/4")});
}

TEST_CASE("causal weights: prevalence for the risk difference") {
  CHECK(weights_of(causal_weights(EffectMeasureKind::RiskDifference, p2())) ==
        std::vector<Rational>{rat("1/2"), rat("1/2")});
}

TEST_CASE("causal weights: baseline-case distribution for the risk ratio") {
  CHECK(weights_of(causal_weights(EffectMeasureKind::RiskRatio, p2())) ==
        std::vector<Rational>{rat("1/3"), rat("2/3")});
  // survivors under no treatment: p * (1 - risk0) / Pr(Y^{a=0}=0)
  CHECK(weights_of(causal_weights(EffectMeasureKind::SurvivalRatio, p2())) ==
        std::vector<Rational>{rat("4/7"), rat("3/7")});
  // cases under treatment: risk1 = 2/5 in both strata
  CHECK(weights_of(causal_weights(EffectMeasureKind::InverseRiskRatio, p2())) ==
        std::vector<Rational>{rat("1/2"), rat("1/2")});
  CHECK(weights_of(causal_weights(EffectMeasureKind::InverseSurvivalRatio, p2())) ==
        std::vector<Rational>{rat("1/2"), rat("1/2")});
}

TEST_CASE("causal weights never exist for the odds ratio") {
  CHECK(code_of([] { causal_weights(EffectMeasureKind::OddsRatio, table1_population()); }) ==
        ErrorCode::NoGeneralWeights);
}

TEST_CASE("causal weights with a degenerate conditioning event") {
  const auto no_cases = CounterfactualPopulation::validate({
      stratum_from_risks("a", rat("1/2"), 0, rat("1/2")),
      stratum_from_risks("b", rat("1/2"), 0, rat("1/4")),
  });
  CHECK(code_of([&] { causal_weights(EffectMeasureKind::RiskRatio, no_cases); }) ==
        ErrorCode::DegenerateConditioningEvent);
}

TEST_CASE("causal weight schemes sum to one") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GeneratorConfig config{.stratum_count = static_cast<int>(1 + seed % 6),
                           .denominator_bound = 200,
                           .confounded = false,
                           .seed = seed};
    const auto population = random_population(config, PopulationConstraint::InteriorRisks);
    for (auto kind : kAllEffectMeasureKinds) {
      if (kind == EffectMeasureKind::OddsRatio) continue;
      CHECK(causal_weights(kind, population).total() == 1);
    }
  }
}

TEST_CASE("weighted_average basics") {
  CHECK(weighted_average({Rational(2), Rational(1)}, {rat("1/3"), rat("2/3")}) == rat("4/3"));
  CHECK(weighted_average({Rational(3), Rational(3)}, {rat("1/7"), rat("5/7")}) == 3);
  CHECK(weighted_average({rat("5/9")}, {Rational(1)}) == rat("5/9"));
}

TEST_CASE("weighted_average is scale equivariant") {
  SplitMix64 rng(11);
  const std::vector<Rational> values{rat("1/3"), rat("-2/5"), Rational(7), rat("9/11")};
  for (int i = 0; i < 50; ++i) {
    std::vector<Rational> weights;
    for (size_t k = 0; k < values.size(); ++k) {
      weights.push_back(Rational(static_cast<long>(rng.below(30)), 7));
    }
    weights[rng.below(values.size())] += rat("1/7");  // keep the total positive
    const Rational scale(1 + static_cast<long>(rng.below(50)), 3);
    std::vector<Rational> scaled = weights;
    for (auto& w : scaled) w *= scale;
    CHECK(weighted_average(values, weights) == weighted_average(values, scaled));
  }
}

TEST_CASE("weighted_average rejects positively weighted undefined values") {
  const std::vector<StratumValue> values{{"a", Rational(2), ""}, {"b", std::nullopt, "why"}};
  const auto positive = WeightVector::validate({{"a", rat("1/2")}, {"b", rat("1/2")}});
  CHECK(code_of([&] { weighted_average(values, positive); }) == ErrorCode::UndefinedStratumValue);

  // zero weight on the undefined stratum is fine
  const auto skipping = WeightVector::validate({{"a", 1}, {"b", 0}});
  CHECK(weighted_average(values, skipping) == 2);

  // labels must line up
  const auto mislabeled = WeightVector::validate({{"a", rat("1/2")}, {"c", rat("1/2")}});
  CHECK(code_of([&] { weighted_average(values, mislabeled); }) == ErrorCode::InputMismatch);
}

TEST_CASE("causal collapsibility holds for rd and rr-minus on the two-stratum fixture") {
  const auto rd = check_causal_collapsibility(EffectMeasureKind::RiskDifference, p2());
  CHECK(rd.weighted_average == rat("1/10"));
  CHECK(rd.marginal_value == rat("1/10"));
  CHECK(rd.residual == 0);
  CHECK(rd.collapsible);

  const auto rr = check_causal_collapsibility(EffectMeasureKind::RiskRatio, p2());
  CHECK(rr.weighted_average == rat("4/3"));
  CHECK(rr.marginal_value == rat("4/3"));
  CHECK(rr.collapsible);
}

TEST_CASE("the odds ratio fails to collapse on the trial population") {
  const auto report = check_causal_collapsibility(
      EffectMeasureKind::OddsRatio, table1_population(),
      WeightVector::validate({{"men", rat("1/4")}, {"women", rat("3/4")}}));
  CHECK(report.weighted_average == 3);
  CHECK(report.marginal_value == rat("99/35"));
  CHECK(report.residual == rat("6/35"));
  CHECK(!report.collapsible);

  // omitted weights propagate the no-general-weights error
  CHECK(code_of([] {
          check_causal_collapsibility(EffectMeasureKind::OddsRatio, table1_population());
        }) == ErrorCode::NoGeneralWeights);
}

TEST_CASE("weight labels must match population strata") {
  CHECK(code_of([] {
          check_causal_collapsibility(EffectMeasureKind::RiskDifference, p2(),
                                      WeightVector::validate({{"x", 1}, {"s2", 1}}));
        }) == ErrorCode::InputMismatch);
}

TEST_CASE("associational collapsibility under randomization") {
  // randomization makes associational equal causal, so the rd scheme collapses
  const auto report = check_associational_collapsibility(
      EffectMeasureKind::RiskDifference, p2_randomized(),
      WeightVector::validate({{"s1", rat("1/2")}, {"s2", rat("1/2")}}));
  CHECK(report.collapsible);
  CHECK(report.marginal_value == rat("1/10"));
}

TEST_CASE("shared stratum value dominates any weighting") {
  // all strata share the associational value c = 2: any weights average to 2
  const auto table = ObservationalTable::validate({
      {"a", Probability(rat("1/2")), Probability(rat("1/3")), Probability(rat("1/5")),
       Probability(rat("2/5"))},
      {"b", Probability(rat("1/2")), Probability(rat("2/3")), Probability(rat("3/10")),
       Probability(rat("3/5"))},
  });
  SplitMix64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto weights = random_weight_vector(rng, table.labels(), 9);
    const auto report =
        check_associational_collapsibility(EffectMeasureKind::RiskRatio, table, weights);
    CHECK(report.weighted_average == 2);
  }
}

TEST_CASE("confounding breaks associational rd collapsibility, oracle-checked") {
  AssignmentMechanism mechanism;
  for (const char* label : {"s1", "s2"}) {
    for (int y1 = 0; y1 <= 1; ++y1) {
      mechanism.set(label, 0, y1, Probability(rat("1/4")));
      mechanism.set(label, 1, y1, Probability(rat("3/4")));
    }
  }
  const auto population = p2();
  const auto table = apply_assignment(population, mechanism);
  const auto weights = WeightVector::validate({{"s1", rat("1/2")}, {"s2", rat("1/2")}});
  const auto report =
      check_associational_collapsibility(EffectMeasureKind::RiskDifference, table, weights);
  CHECK(!report.collapsible);
  CHECK(report.residual != 0);

  // the oracle recomputes every ingredient from the full joint
  const JointEnumerator oracle(population, mechanism);
  const Rational marginal_rd =
      *oracle.observed_marginal_risk(1) - *oracle.observed_marginal_risk(0);
  CHECK(report.marginal_value == marginal_rd);
  Rational oracle_avg = 0;
  for (const char* label : {"s1", "s2"}) {
    oracle_avg +=
        rat("1/2") * (*oracle.observed_risk(1, label) - *oracle.observed_risk(0, label));
  }
  CHECK(report.weighted_average == oracle_avg);
  CHECK(report.residual == oracle_avg - marginal_rd);
  CHECK(report.marginal_value == rat("11/40"));  // causal marginal rd is 1/10
}

TEST_CASE("newman weights for the risk difference") {
  const auto [weights, conditions] =
      newman_weights(EffectMeasureKind::RiskDifference, p2_randomized());
  CHECK(weights_of(weights) == std::vector<Rational>{rat("1/2"), rat("1/2")});
  REQUIRE(conditions.size() == 2);
  CHECK(conditions[0].name == "v-indep-y-given-a0");
  CHECK(!conditions[0].holds);  // r0 differs: 1/5 vs 2/5
  CHECK(conditions[1].name == "v-indep-a");
  CHECK(conditions[1].holds);  // randomized: pA constant

  // and the definition-1 check passes with these weights
  const auto report = check_associational_collapsibility(EffectMeasureKind::RiskDifference,
                                                         p2_randomized(), weights);
  CHECK(report.collapsible);
}

TEST_CASE("newman weights for rr-minus collapse when pA is constant") {
  const auto [weights, conditions] = newman_weights(EffectMeasureKind::RiskRatio, p2_randomized());
  CHECK(weights_of(weights) == std::vector<Rational>{rat("1/3"), rat("2/3")});
  const auto report =
      check_associational_collapsibility(EffectMeasureKind::RiskRatio, p2_randomized(), weights);
  CHECK(report.collapsible);
  CHECK(report.marginal_value == rat("4/3"));
}

TEST_CASE("newman odds-ratio weights collapse under a constant baseline risk") {
  const auto table = ObservationalTable::validate({
      {"a", Probability(rat("1/2")), Probability(rat("1/3")), Probability(rat("1/4")),
       Probability(rat("1/2"))},
      {"b", Probability(rat("1/2")), Probability(rat("2/3")), Probability(rat("1/4")),
       Probability(rat("2/3"))},
  });
  const auto [weights, conditions] = newman_weights(EffectMeasureKind::OddsRatio, table);
  CHECK(weights_of(weights) == std::vector<Rational>{rat("3/7"), rat("4/7")});
  REQUIRE(conditions.size() == 3);
  CHECK(conditions[2].name == "constant-baseline-risk");
  CHECK(conditions[2].holds);

  const auto report = check_associational_collapsibility(EffectMeasureKind::OddsRatio, table,
                                                         weights);
  CHECK(report.collapsible);
  CHECK(report.marginal_value == rat("33/7"));
  CHECK(report.weighted_average == rat("33/7"));
}

TEST_CASE("newman condition flags react to covariate-exposure association") {
  const auto table = ObservationalTable::validate({
      {"a", Probability(rat("1/2")), Probability(rat("0.2")), Probability(rat("1/4")),
       Probability(rat("1/2"))},
      {"b", Probability(rat("1/2")), Probability(rat("0.8")), Probability(rat("1/4")),
       Probability(rat("1/2"))},
  });
  const auto result = newman_weights(EffectMeasureKind::RiskDifference, table);
  CHECK(result.conditions[0].holds);   // r0 constant
  CHECK(!result.conditions[1].holds);  // pA differs
}

TEST_CASE("newman weights reject unsupported kinds") {
  for (auto kind : {EffectMeasureKind::SurvivalRatio, EffectMeasureKind::InverseRiskRatio,
                    EffectMeasureKind::InverseSurvivalRatio}) {
    CHECK(code_of([&] { newman_weights(kind, p2_randomized()); }) == ErrorCode::UnsupportedKind);
  }
}

TEST_CASE("weight feasibility: the trial population's odds ratio is out of reach") {
  const auto result = weight_feasibility({Rational(3), Rational(3)}, rat("99/35"));
  CHECK(!result.feasible);
  CHECK(!result.witness.has_value());
  CHECK(result.evidence.min_value == 3);
  CHECK(result.evidence.max_value == 3);
  CHECK(result.evidence.marginal == rat("99/35"));
}

TEST_CASE("weight feasibility: two-point witness") {
  const auto result = weight_feasibility({rat("1/5"), Rational(0)}, rat("1/10"));
  CHECK(result.feasible);
  REQUIRE(result.witness.has_value());
  CHECK(weights_of(*result.witness) == std::vector<Rational>{rat("1/2"), rat("1/2")});
}

TEST_CASE("weight feasibility: degenerate cases") {
  const auto single = weight_feasibility({rat("5/7")}, rat("5/7"));
  CHECK(single.feasible);
  CHECK(weights_of(*single.witness) == std::vector<Rational>{Rational(1)});

  // marginal on the boundary: point mass on the attaining stratum
  const auto boundary = weight_feasibility({Rational(2), Rational(5)}, Rational(2));
  CHECK(boundary.feasible);
  CHECK(weights_of(*boundary.witness) == std::vector<Rational>{Rational(1), Rational(0)});

  // deterministic lowest-index choice for the two-point combination
  const auto pick =
      weight_feasibility({Rational(2), Rational(0), Rational(1), Rational(1)}, Rational(1));
  CHECK(weights_of(*pick.witness) ==
        std::vector<Rational>{rat("1/2"), rat("1/2"), Rational(0), Rational(0)});

  CHECK(code_of([] { weight_feasibility(std::vector<Rational>{}, Rational(1)); }) ==
        ErrorCode::InputMismatch);
}

TEST_CASE("weight feasibility is sound on random inputs") {
  SplitMix64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const size_t n = 1 + rng.below(6);
    std::vector<Rational> values;
    for (size_t k = 0; k < n; ++k) {
      values.push_back(Rational(static_cast<long>(rng.below(41)) - 20, 1 + static_cast<long>(rng.below(9))));
    }
    const Rational marginal(static_cast<long>(rng.below(41)) - 20,
                            1 + static_cast<long>(rng.below(9)));
    const auto result = weight_feasibility(values, marginal);
    const Rational lo = result.evidence.min_value;
    const Rational hi = result.evidence.max_value;
    if (result.feasible) {
      REQUIRE(result.witness.has_value());
      CHECK(weighted_average(values, weights_of(*result.witness)) == marginal);
    } else {
      CHECK((marginal < lo || marginal > hi));
      CHECK(!result.witness.has_value());
    }
  }
}

TEST_CASE("rd universality: residual is exactly zero on random populations") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GeneratorConfig config{.stratum_count = static_cast<int>(1 + seed % 8),
                           .denominator_bound = 1000,
                           .confounded = false,
                           .seed = seed};
    const auto population = random_population(config);
    const auto report =
        check_causal_collapsibility(EffectMeasureKind::RiskDifference, population);
    CHECK(report.residual == 0);
    CHECK(report.collapsible);
  }
}

TEST_CASE("risk-ratio universality for all four variants on interior populations") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GeneratorConfig config{.stratum_count = static_cast<int>(1 + seed % 8),
                           .denominator_bound = 1000,
                           .confounded = false,
                           .seed = seed};
    const auto population = random_population(config, PopulationConstraint::InteriorRisks);
    for (auto kind : {EffectMeasureKind::RiskRatio, EffectMeasureKind::SurvivalRatio,
                      EffectMeasureKind::InverseRiskRatio,
                      EffectMeasureKind::InverseSurvivalRatio}) {
      const auto report = check_causal_collapsibility(kind, population);
      CHECK(report.residual == 0);
    }
  }
}

TEST_CASE("marginal-prevalence weights do not generally collapse the risk ratio") {
  // the correct rr-minus weights are (1/3, 2/3); plain prevalences miss
  const auto report = check_causal_collapsibility(
      EffectMeasureKind::RiskRatio, p2(),
      WeightVector::validate({{"s1", rat("1/2")}, {"s2", rat("1/2")}}));
  CHECK(report.weighted_average == rat("3/2"));
  CHECK(report.marginal_value == rat("4/3"));
  CHECK(!report.collapsible);
}

TEST_CASE("no effect modification collapses under any weights") {
  SplitMix64 rng(31);
  for (int i = 0; i < 25; ++i) {
    const long denom = 12;
    const long shift = static_cast<long>(rng.below(5));  // rd = shift/12 >= 0
    std::vector<CounterfactualStratum> rd_strata;
    std::vector<CounterfactualStratum> rr_strata;
    const int n = 2 + static_cast<int>(rng.below(4));
    for (int k = 0; k < n; ++k) {
      const Rational prevalence(1, n);
      const long base = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(denom - shift - 1)));
      rd_strata.push_back(stratum_from_risks("v" + std::to_string(k), prevalence,
                                             Rational(base, denom),
                                             Rational(base + shift, denom)));
      // rr = 3/2 everywhere: r0 in (0, 2/3], r1 = 3/2 r0
      const long r0_num = 1 + static_cast<long>(rng.below(4));  // <= 4/6
      rr_strata.push_back(stratum_from_risks("v" + std::to_string(k), prevalence,
                                             Rational(r0_num, 6), Rational(r0_num, 4)));
    }
    const auto rd_population = CounterfactualPopulation::validate(rd_strata);
    const auto rr_population = CounterfactualPopulation::validate(rr_strata);
    const Rational rd_value(shift, denom);

    CHECK(marginal_effect(EffectMeasureKind::RiskDifference, rd_population) == rd_value);
    CHECK(marginal_effect(EffectMeasureKind::RiskRatio, rr_population) == rat("3/2"));

    for (int w = 0; w < 20; ++w) {
      const auto rd_weights = random_weight_vector(rng, rd_population.labels(), 17);
      const auto rd_report =
          check_causal_collapsibility(EffectMeasureKind::RiskDifference, rd_population, rd_weights);
      CHECK(rd_report.residual == 0);

      const auto rr_weights = random_weight_vector(rng, rr_population.labels(), 17);
      const auto rr_report =
          check_causal_collapsibility(EffectMeasureKind::RiskRatio, rr_population, rr_weights);
      CHECK(rr_report.residual == 0);
    }
  }
}

TEST_CASE("no effect modification collapses the remaining ratio kinds too") {
  // constant values by construction: rr-plus 3/4, inv-rr-minus 4/3, inv-rr-plus 2/3
  std::vector<CounterfactualStratum> survival, inverse, inverse_survival;
  SplitMix64 rng(77);
  const int n = 3;
  for (int k = 0; k < n; ++k) {
    const std::string label = "v" + std::to_string(k);
    const Rational prevalence(1, n);
    const Rational r0(1 + static_cast<long>(rng.below(7)), 8);
    // (1-r1) = 3/4 (1-r0)
    survival.push_back(stratum_from_risks(label, prevalence, r0, 1 - rat("3/4") * (1 - r0)));
    // r0 = 4/3 r1, r1 in (0, 3/4]
    const Rational r1(1 + static_cast<long>(rng.below(6)), 8);
    inverse.push_back(stratum_from_risks(label, prevalence, rat("4/3") * r1, r1));
    // (1-r0) = 2/3 (1-r1)
    inverse_survival.push_back(
        stratum_from_risks(label, prevalence, 1 - rat("2/3") * (1 - r1), r1));
  }
  const struct {
    EffectMeasureKind kind;
    CounterfactualPopulation population;
    Rational value;
  } cases[] = {
      {EffectMeasureKind::SurvivalRatio, CounterfactualPopulation::validate(survival),
       rat("3/4")},
      {EffectMeasureKind::InverseRiskRatio, CounterfactualPopulation::validate(inverse),
       rat("4/3")},
      {EffectMeasureKind::InverseSurvivalRatio,
       CounterfactualPopulation::validate(inverse_survival), rat("2/3")},
  };
  for (const auto& c : cases) {
    CHECK(marginal_effect(c.kind, c.population) == c.value);
    for (int w = 0; w < 30; ++w) {
      const auto weights = random_weight_vector(rng, c.population.labels(), 13);
      const auto report = check_causal_collapsibility(c.kind, c.population, weights);
      CHECK(report.residual == 0);
      CHECK(report.weighted_average == c.value);
    }
  }
}

TEST_CASE("coupling invariance: only the margins matter") {
  // move mass along the diagonal: margins stay fixed, the coupling changes
  auto perturb = [](const CounterfactualPopulation& population, const Rational& t) {
    std::vector<CounterfactualStratum> strata;
    for (const auto& s : population.strata()) {
      const auto& j = s.joint;
      strata.push_back(CounterfactualStratum{
          s.label, s.prevalence,
          JointDistribution{Probability(j.q00.value() + t), Probability(j.q01.value() - t),
                            Probability(j.q10.value() - t), Probability(j.q11.value() + t)}});
    }
    return CounterfactualPopulation::validate(strata);
  };

  const auto base = p2();  // q01, q10 >= 3/25 in both strata; t below that is safe
  for (const char* t : {"1/25", "-2/25", "3/50"}) {
    const auto moved = perturb(base, rat(t));
    for (auto kind : kAllEffectMeasureKinds) {
      CHECK(stratum_effects(kind, base) == stratum_effects(kind, moved));
      CHECK(marginal_effect(kind, base) == marginal_effect(kind, moved));
      if (kind == EffectMeasureKind::OddsRatio) continue;
      CHECK(causal_weights(kind, base) == causal_weights(kind, moved));
      const auto report_base = check_causal_collapsibility(kind, base);
      const auto report_moved = check_causal_collapsibility(kind, moved);
      CHECK(collapsibility_report_to_json(report_base, 6).dump() ==
            collapsibility_report_to_json(report_moved, 6).dump());
    }
  }
}

TEST_CASE("definition equivalence holds under randomization") {
  const auto report =
      def_equivalence_check(p2(), AssignmentMechanism::constant(Probability(rat("1/2"))));
  CHECK(report.conditional.both());
  CHECK(report.marginal.both());
  CHECK(report.fully_exchangeable);
  CHECK(report.agrees);
  for (const auto& kind : report.kinds) {
    CHECK(kind.agrees);
    for (const auto& stratum : kind.strata) {
      CHECK(comparison_status(stratum.values) != ComparisonStatus::Differs);
    }
  }

  // single stratum, any interior constant
  const auto single = CounterfactualPopulation::validate(
      {stratum_from_risks("s", 1, rat("1/4"), rat("1/2"))});
  const auto single_report =
      def_equivalence_check(single, AssignmentMechanism::constant(Probability(rat("2/7"))));
  CHECK(single_report.fully_exchangeable);
  CHECK(single_report.agrees);
}

TEST_CASE("definition equivalence fails under confounding with the exact oracle gap") {
  AssignmentMechanism mechanism;
  for (const char* label : {"s1", "s2"}) {
    for (int y1 = 0; y1 <= 1; ++y1) {
      mechanism.set(label, 0, y1, Probability(rat("1/4")));
      mechanism.set(label, 1, y1, Probability(rat("3/4")));
    }
  }
  const auto population = p2();
  const auto report = def_equivalence_check(population, mechanism);
  CHECK(!report.conditional.a0);
  CHECK(!report.fully_exchangeable);
  CHECK(!report.agrees);

  const auto& rd = report.kinds[0];
  REQUIRE(rd.kind == EffectMeasureKind::RiskDifference);
  REQUIRE(rd.marginal.causal.has_value());
  REQUIRE(rd.marginal.associational.has_value());
  CHECK(*rd.marginal.causal == rat("1/10"));
  CHECK(*rd.marginal.associational == rat("11/40"));

  const JointEnumerator oracle(population, mechanism);
  const Rational oracle_gap = (*oracle.observed_marginal_risk(1) -
                               *oracle.observed_marginal_risk(0)) -
                              (oracle.causal_risk(1) - oracle.causal_risk(0));
  CHECK(*rd.marginal.associational - *rd.marginal.causal == oracle_gap);
  CHECK(oracle_gap == rat("7/40"));
}
