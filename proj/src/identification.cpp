#include "collapsekit/identification.hpp"

#include <set>

namespace collapsekit {

namespace {

Rational require_r0(const ObservationalStratum& row) {
  if (!row.r0.has_value()) {
    fail(ErrorCode::AbsentCell, "stratum '" + row.label + "' is missing r0");
  }
  return row.r0->value();
}

Rational require_r1(const ObservationalStratum& row) {
  if (!row.r1.has_value()) {
    fail(ErrorCode::AbsentCell, "stratum '" + row.label + "' is missing r1");
  }
  return row.r1->value();
}

}  // namespace

WeightVector identify_rr_minus_weights(const ObservationalTable& table) {
  // Pr(V=v | Y^{a=0}=1) = Pr(Y=1|A=0,V=v) Pr(V=v) / Pr(Y^{a=0}=1) under
  // exchangeability and consistency; the denominator cancels on
  // normalization.
  Rational total = 0;
  std::vector<WeightVector::Entry> entries;
  entries.reserve(table.strata().size());
  for (const auto& row : table.strata()) {
    const Rational numerator = require_r0(row) * row.prevalence.value();
    entries.push_back({row.label, numerator});
    total += numerator;
  }
  if (total == 0) {
    fail(ErrorCode::AllZeroWeights, "every stratum has Pr(Y=1|A=0,V=v) = 0");
  }
  for (auto& entry : entries) entry.weight /= total;
  return WeightVector::validate(std::move(entries));
}

WeightVector miettinen_weights(const ObservationalTable& table) {
  Rational total = 0;
  std::vector<WeightVector::Entry> entries;
  entries.reserve(table.strata().size());
  for (const auto& row : table.strata()) {
    const Rational weight = row.prevalence.value() * require_r0(row);
    entries.push_back({row.label, weight});
    total += weight;
  }
  if (total == 0) {
    fail(ErrorCode::AllZeroWeights, "every stratum has Pr(Y=1|A=0,V=v) = 0");
  }
  for (auto& entry : entries) entry.weight /= total;
  return WeightVector::validate(std::move(entries));
}

RiskPair standardized_risks(const ObservationalTable& table) {
  Rational r0 = 0;
  Rational r1 = 0;
  for (const auto& row : table.strata()) {
    r0 += row.prevalence.value() * require_r0(row);
    r1 += row.prevalence.value() * require_r1(row);
  }
  return RiskPair{Probability(r0), Probability(r1)};
}

Rational miettinen_srr(const ObservationalTable& table) {
  const RiskPair risks = standardized_risks(table);
  if (risks.r0.value() == 0) {
    fail(ErrorCode::ZeroDenominator, "standardized unexposed risk is zero");
  }
  return risks.r1.value() / risks.r0.value();
}

Rational standardized_effect(EffectMeasureKind kind, const ObservationalTable& table) {
  return effect_value(kind, standardized_risks(table));
}

WeightVector unexposed_target_weights(const std::vector<OutcomeStratum>& strata) {
  if (strata.empty()) {
    fail(ErrorCode::EmptyPopulationError, "no strata given");
  }
  std::set<std::string> seen;
  Rational prevalence_sum = 0;
  Rational total = 0;
  std::vector<WeightVector::Entry> entries;
  entries.reserve(strata.size());
  for (const auto& s : strata) {
    if (!seen.insert(s.label).second) {
      fail(ErrorCode::DuplicateLabelError, "duplicate stratum label '" + s.label + "'");
    }
    prevalence_sum += s.prevalence.value();
    const Rational numerator = s.prevalence.value() * s.event_probability.value();
    entries.push_back({s.label, numerator});
    total += numerator;
  }
  if (prevalence_sum != 1) {
    fail(ErrorCode::PrevalenceSumError,
         "prevalences sum to " + format_rational(prevalence_sum) + ", expected 1");
  }
  if (total == 0) {
    fail(ErrorCode::AllZeroWeights, "Pr(Y=1) = 0 in the target population");
  }
  for (auto& entry : entries) entry.weight /= total;
  return WeightVector::validate(std::move(entries));
}

}  // namespace collapsekit
