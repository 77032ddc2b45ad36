#include "collapsekit/collapsibility.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace collapsekit {

WeightVector WeightVector::validate(std::vector<Entry> entries) {
  if (entries.empty()) {
    fail(ErrorCode::InputMismatch, "weight vector must not be empty");
  }
  std::set<std::string> seen;
  bool any_positive = false;
  for (const auto& entry : entries) {
    if (!seen.insert(entry.label).second) {
      fail(ErrorCode::DuplicateLabelError, "duplicate weight label '" + entry.label + "'");
    }
    if (entry.weight < 0) {
      fail(ErrorCode::InputMismatch,
           "negative weight " + format_rational(entry.weight) + " for '" + entry.label + "'");
    }
    if (entry.weight > 0) any_positive = true;
  }
  if (!any_positive) {
    fail(ErrorCode::AllZeroWeights, "all weights are zero");
  }
  return WeightVector(std::move(entries));
}

WeightVector WeightVector::uniform(const std::vector<std::string>& labels) {
  std::vector<Entry> entries;
  entries.reserve(labels.size());
  const Rational w(1, static_cast<long>(labels.empty() ? 1 : labels.size()));
  for (const auto& label : labels) entries.push_back({label, w});
  return validate(std::move(entries));
}

WeightVector WeightVector::from_values(const std::vector<std::string>& labels,
                                       const std::vector<Rational>& weights) {
  if (labels.size() != weights.size()) {
    fail(ErrorCode::InputMismatch, "expected " + std::to_string(labels.size()) +
                                       " weights, got " + std::to_string(weights.size()));
  }
  std::vector<Entry> entries;
  entries.reserve(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) entries.push_back({labels[i], weights[i]});
  return validate(std::move(entries));
}

std::vector<std::string> WeightVector::labels() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

Rational WeightVector::total() const {
  Rational sum = 0;
  for (const auto& e : entries_) sum += e.weight;
  return sum;
}

WeightVector WeightVector::normalized() const {
  const Rational sum = total();
  std::vector<Entry> entries = entries_;
  for (auto& e : entries) e.weight /= sum;
  return WeightVector(std::move(entries));
}

namespace {

void require_same_labels(const std::vector<std::string>& expected, const WeightVector& weights) {
  if (weights.labels() != expected) {
    fail(ErrorCode::InputMismatch, "weight labels do not match the strata one-to-one");
  }
}

// Conditioning events for the four risk-ratio variants.
struct ConditioningSpec {
  bool outcome_under_treatment;  // condition on Y^{a=1} rather than Y^{a=0}
  bool event_is_case;            // condition on Y^a = 1 rather than Y^a = 0
  const char* description;
};

std::optional<ConditioningSpec> conditioning_for(EffectMeasureKind kind) {
  switch (kind) {
    case EffectMeasureKind::RiskRatio:
      return ConditioningSpec{false, true, "Pr(Y^{a=0}=1)"};
    case EffectMeasureKind::SurvivalRatio:
      return ConditioningSpec{false, false, "Pr(Y^{a=0}=0)"};
    case EffectMeasureKind::InverseRiskRatio:
      return ConditioningSpec{true, true, "Pr(Y^{a=1}=1)"};
    case EffectMeasureKind::InverseSurvivalRatio:
      return ConditioningSpec{true, false, "Pr(Y^{a=1}=0)"};
    default:
      return std::nullopt;
  }
}

}  // namespace

WeightVector causal_weights(EffectMeasureKind kind, const CounterfactualPopulation& population) {
  const auto& strata = population.strata();
  std::vector<WeightVector::Entry> entries;
  entries.reserve(strata.size());

  if (kind == EffectMeasureKind::OddsRatio) {
    fail(ErrorCode::NoGeneralWeights,
         "no generally applicable collapsibility weights exist for the odds ratio");
  }

  if (kind == EffectMeasureKind::RiskDifference) {
    // Covariate prevalence Pr(V=v); already sums to 1.
    for (const auto& s : strata) entries.push_back({s.label, s.prevalence.value()});
    return WeightVector::validate(std::move(entries));
  }

  const auto spec = conditioning_for(kind);
  assert(spec.has_value());
  Rational event_mass = 0;
  std::vector<Rational> numerators;
  numerators.reserve(strata.size());
  for (const auto& s : strata) {
    const Rational risk = spec->outcome_under_treatment ? s.joint.risk1() : s.joint.risk0();
    const Rational event_prob = spec->event_is_case ? risk : 1 - risk;
    const Rational numerator = s.prevalence.value() * event_prob;  // Bayes numerator
    numerators.push_back(numerator);
    event_mass += numerator;
  }
  if (event_mass == 0) {
    fail(ErrorCode::DegenerateConditioningEvent,
         std::string("conditioning event has probability zero: ") + spec->description);
  }
  for (size_t i = 0; i < strata.size(); ++i) {
    entries.push_back({strata[i].label, numerators[i] / event_mass});
  }
  return WeightVector::validate(std::move(entries));
}

Rational weighted_average(const std::vector<StratumValue>& values, const WeightVector& weights) {
  if (values.size() != weights.size()) {
    fail(ErrorCode::InputMismatch, "value and weight lists differ in length");
  }
  Rational numerator = 0;
  const Rational total = weights.total();
  for (size_t i = 0; i < values.size(); ++i) {
    const auto& entry = weights.entries()[i];
    if (entry.label != values[i].label) {
      fail(ErrorCode::InputMismatch, "weight labels do not match the strata one-to-one");
    }
    if (entry.weight == 0) continue;  // undefined values are skippable only at weight zero
    if (!values[i].defined()) {
      fail(ErrorCode::UndefinedStratumValue,
           "stratum '" + values[i].label + "' has positive weight but undefined value" +
               (values[i].note.empty() ? "" : " (" + values[i].note + ")"));
    }
    numerator += entry.weight * *values[i].value;
  }
  return numerator / total;
}

Rational weighted_average(const std::vector<Rational>& values,
                          const std::vector<Rational>& weights) {
  if (values.size() != weights.size()) {
    fail(ErrorCode::InputMismatch, "value and weight lists differ in length");
  }
  Rational numerator = 0;
  Rational total = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (weights[i] < 0) {
      fail(ErrorCode::InputMismatch, "negative weight " + format_rational(weights[i]));
    }
    numerator += weights[i] * values[i];
    total += weights[i];
  }
  if (total == 0) fail(ErrorCode::AllZeroWeights, "all weights are zero");
  return numerator / total;
}

CollapsibilityReport check_causal_collapsibility(EffectMeasureKind kind,
                                                 const CounterfactualPopulation& population,
                                                 std::optional<WeightVector> weights) {
  CollapsibilityReport report;
  report.definition = CollapsibilityReport::Definition::Causal;
  report.kind = kind;
  report.weights = weights.has_value() ? std::move(*weights) : causal_weights(kind, population);
  require_same_labels(population.labels(), report.weights);
  report.stratum_values = stratum_effects(kind, population);
  report.marginal_value = marginal_effect(kind, population);
  report.weighted_average = weighted_average(report.stratum_values, report.weights);
  report.residual = report.weighted_average - report.marginal_value;
  report.collapsible = report.residual == 0;
  return report;
}

namespace {

std::vector<StratumValue> associational_stratum_effects(EffectMeasureKind kind,
                                                        const ObservationalTable& table) {
  std::vector<StratumValue> out;
  out.reserve(table.strata().size());
  for (const auto& row : table.strata()) {
    if (!row.r0.has_value() || !row.r1.has_value()) {
      const char* which = !row.r0.has_value() ? "r0" : "r1";
      out.push_back({row.label, std::nullopt, std::string("absent cell: ") + which});
      continue;
    }
    std::string note;
    auto value = try_effect_value(kind, RiskPair{*row.r0, *row.r1}, &note);
    out.push_back({row.label, std::move(value), std::move(note)});
  }
  return out;
}

}  // namespace

RiskPair marginal_associational_risks(const ObservationalTable& table) {
  Rational exposed_mass = 0, exposed_cases = 0;
  Rational unexposed_mass = 0, unexposed_cases = 0;
  for (const auto& row : table.strata()) {
    const Rational p = row.prevalence.value();
    const Rational mass1 = p * row.pA.value();
    const Rational mass0 = p * row.pA.complement();
    if (mass1 > 0) {
      if (!row.r1.has_value()) {
        fail(ErrorCode::AbsentCell, "stratum '" + row.label + "' is missing r1");
      }
      exposed_mass += mass1;
      exposed_cases += mass1 * row.r1->value();
    }
    if (mass0 > 0) {
      if (!row.r0.has_value()) {
        fail(ErrorCode::AbsentCell, "stratum '" + row.label + "' is missing r0");
      }
      unexposed_mass += mass0;
      unexposed_cases += mass0 * row.r0->value();
    }
  }
  if (exposed_mass == 0) {
    fail(ErrorCode::DegenerateConditioningEvent, "Pr(A=1) = 0: no exposed individuals");
  }
  if (unexposed_mass == 0) {
    fail(ErrorCode::DegenerateConditioningEvent, "Pr(A=0) = 0: no unexposed individuals");
  }
  return RiskPair{Probability(unexposed_cases / unexposed_mass),
                  Probability(exposed_cases / exposed_mass)};
}

CollapsibilityReport check_associational_collapsibility(EffectMeasureKind kind,
                                                        const ObservationalTable& table,
                                                        const WeightVector& weights) {
  CollapsibilityReport report;
  report.definition = CollapsibilityReport::Definition::Associational;
  report.kind = kind;
  report.weights = weights;
  require_same_labels(table.labels(), report.weights);
  report.stratum_values = associational_stratum_effects(kind, table);
  report.marginal_value = effect_value(kind, marginal_associational_risks(table));
  report.weighted_average = weighted_average(report.stratum_values, report.weights);
  report.residual = report.weighted_average - report.marginal_value;
  report.collapsible = report.residual == 0;
  return report;
}

NewmanWeights newman_weights(EffectMeasureKind kind, const ObservationalTable& table) {
  if (kind != EffectMeasureKind::RiskDifference && kind != EffectMeasureKind::RiskRatio &&
      kind != EffectMeasureKind::OddsRatio) {
    fail(ErrorCode::UnsupportedKind,
         std::string("no associational weight scheme for '") + kind_name(kind) +
             "' (supported: rd, rr-minus, or)");
  }

  const auto& strata = table.strata();
  Rational exposed_mass = 0;  // Pr(A=1)
  for (const auto& row : strata) exposed_mass += row.prevalence.value() * row.pA.value();
  if (exposed_mass == 0) {
    fail(ErrorCode::DegenerateConditioningEvent, "Pr(A=1) = 0: no exposed individuals");
  }

  std::vector<WeightVector::Entry> entries;
  entries.reserve(strata.size());
  for (const auto& row : strata) {
    // Pr(V=v | A=1)
    const Rational base = row.prevalence.value() * row.pA.value() / exposed_mass;
    Rational weight = base;
    if (kind != EffectMeasureKind::RiskDifference && base > 0) {
      if (!row.r0.has_value()) {
        fail(ErrorCode::AbsentCell, "stratum '" + row.label + "' is missing r0");
      }
      weight *= row.r0->value();  // rr-minus: Pr(V=v|A=1) * Pr(Y=1|A=0,V=v)
      if (kind == EffectMeasureKind::OddsRatio) {
        if (!row.r1.has_value()) {
          fail(ErrorCode::AbsentCell, "stratum '" + row.label + "' is missing r1");
        }
        if (row.r0->value() == 1) {
          fail(ErrorCode::ZeroDenominator,
               "odds-ratio weight undefined: r0 = 1 in stratum '" + row.label + "'");
        }
        // ... * Pr(Y=0|A=1,V=v) / Pr(Y=0|A=0,V=v)
        weight *= row.r1->complement() / row.r0->complement();
      }
    }
    entries.push_back({row.label, weight});
  }
  NewmanWeights result{WeightVector::validate(std::move(entries)).normalized(), {}};

  // Probabilistic conditions under which the scheme collapses (checked on
  // present cells; an absent needed cell makes a condition unverifiable and
  // therefore not established).
  bool r0_constant = true;
  bool pa_constant = true;
  for (const auto& row : strata) {
    if (!row.r0.has_value() || !strata.front().r0.has_value() ||
        row.r0->value() != strata.front().r0->value()) {
      r0_constant = false;
    }
    if (row.pA.value() != strata.front().pA.value()) pa_constant = false;
  }
  result.conditions.push_back({"v-indep-y-given-a0", r0_constant});
  result.conditions.push_back({"v-indep-a", pa_constant});
  if (kind == EffectMeasureKind::OddsRatio) {
    result.conditions.push_back({"constant-baseline-risk", r0_constant});
  }
  return result;
}

FeasibilityResult weight_feasibility(const std::vector<std::string>& labels,
                                     const std::vector<Rational>& values,
                                     const Rational& marginal) {
  if (values.empty()) {
    fail(ErrorCode::InputMismatch, "feasibility requires at least one defined stratum value");
  }
  if (labels.size() != values.size()) {
    fail(ErrorCode::InputMismatch, "label and value lists differ in length");
  }

  FeasibilityResult result;
  result.evidence.min_value = *std::min_element(values.begin(), values.end());
  result.evidence.max_value = *std::max_element(values.begin(), values.end());
  result.evidence.marginal = marginal;

  if (marginal < result.evidence.min_value || marginal > result.evidence.max_value) {
    result.feasible = false;
    return result;
  }
  result.feasible = true;

  std::vector<Rational> weights(values.size(), Rational(0));
  if (result.evidence.min_value == result.evidence.max_value) {
    // All stratum values equal the marginal; any weights work.
    result.witness = WeightVector::uniform(labels);
    return result;
  }
  size_t low = values.size(), high = values.size();
  for (size_t i = 0; i < values.size(); ++i) {
    if (low == values.size() && values[i] <= marginal) low = i;
    if (high == values.size() && values[i] >= marginal) high = i;
  }
  assert(low < values.size() && high < values.size());
  if (low == high) {
    weights[low] = 1;  // a stratum attains the marginal exactly
  } else {
    const Rational span = values[high] - values[low];
    weights[low] = (values[high] - marginal) / span;
    weights[high] = (marginal - values[low]) / span;
  }
  result.witness = WeightVector::from_values(labels, weights);
  assert(weighted_average(values, weights) == marginal);
  return result;
}

FeasibilityResult weight_feasibility(const std::vector<Rational>& values,
                                     const Rational& marginal) {
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) labels.push_back(std::to_string(i));
  return weight_feasibility(labels, values, marginal);
}

ComparisonStatus comparison_status(const ValueComparison& comparison) {
  if (!comparison.causal.has_value() || !comparison.associational.has_value()) {
    return ComparisonStatus::Skipped;
  }
  return *comparison.causal == *comparison.associational ? ComparisonStatus::Equal
                                                         : ComparisonStatus::Differs;
}

DefEquivalenceReport def_equivalence_check(const CounterfactualPopulation& population,
                                           const AssignmentMechanism& mechanism) {
  DefEquivalenceReport report;
  report.conditional = check_conditional_exchangeability(population, mechanism);
  report.marginal = check_marginal_exchangeability(population, mechanism);
  report.fully_exchangeable = report.conditional.both() && report.marginal.both();

  const ObservationalTable table = apply_assignment(population, mechanism);
  std::optional<RiskPair> marginal_assoc;
  try {
    marginal_assoc = marginal_associational_risks(table);
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
  }
  const RiskPair marginal_causal = marginal_risks(population);

  for (auto kind : kAllEffectMeasureKinds) {
    KindComparison comparison;
    comparison.kind = kind;

    const auto causal_values = stratum_effects(kind, population);
    const auto assoc_values = associational_stratum_effects(kind, table);
    for (size_t i = 0; i < causal_values.size(); ++i) {
      StratumComparison sc;
      sc.label = causal_values[i].label;
      sc.values.causal = causal_values[i].value;
      sc.values.associational = assoc_values[i].value;
      if (comparison_status(sc.values) == ComparisonStatus::Differs) comparison.agrees = false;
      comparison.strata.push_back(std::move(sc));
    }

    comparison.marginal.causal = try_effect_value(kind, marginal_causal);
    if (marginal_assoc.has_value()) {
      comparison.marginal.associational = try_effect_value(kind, *marginal_assoc);
    }
    if (comparison_status(comparison.marginal) == ComparisonStatus::Differs) {
      comparison.agrees = false;
    }
    if (!comparison.agrees) report.agrees = false;
    report.kinds.push_back(std::move(comparison));
  }
  return report;
}

}  // namespace collapsekit
