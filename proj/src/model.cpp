#include "collapsekit/model.hpp"

#include <algorithm>
#include <set>

namespace collapsekit {

JointDistribution JointDistribution::independent(const Probability& risk0,
                                                 const Probability& risk1) {
  const Rational p0 = risk0.value();
  const Rational p1 = risk1.value();
  return JointDistribution{
      .q00 = Probability((1 - p0) * (1 - p1)),
      .q01 = Probability((1 - p0) * p1),
      .q10 = Probability(p0 * (1 - p1)),
      .q11 = Probability(p0 * p1),
  };
}

namespace {

void check_unique_labels(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      fail(ErrorCode::DuplicateLabelError, "duplicate stratum label '" + label + "'");
    }
  }
}

}  // namespace

CounterfactualPopulation CounterfactualPopulation::validate(
    std::vector<CounterfactualStratum> strata, std::vector<std::string>* warnings) {
  if (strata.empty()) {
    fail(ErrorCode::EmptyPopulationError, "population has no strata");
  }
  std::vector<CounterfactualStratum> kept;
  Rational prevalence_sum = 0;
  std::vector<std::string> labels;
  for (auto& stratum : strata) {
    if (stratum.joint.sum() != 1) {
      fail(ErrorCode::JointSumError, "joint distribution of stratum '" + stratum.label +
                                         "' sums to " + format_rational(stratum.joint.sum()) +
                                         ", expected 1");
    }
    prevalence_sum += stratum.prevalence.value();
    labels.push_back(stratum.label);
    if (stratum.prevalence.value() == 0) {
      if (warnings != nullptr) {
        warnings->push_back("dropped stratum '" + stratum.label + "' with zero prevalence");
      }
      continue;
    }
    kept.push_back(std::move(stratum));
  }
  check_unique_labels(labels);
  if (prevalence_sum != 1) {
    fail(ErrorCode::PrevalenceSumError,
         "prevalences sum to " + format_rational(prevalence_sum) + ", expected 1");
  }
  if (kept.empty()) {
    fail(ErrorCode::EmptyPopulationError, "population has no stratum with positive prevalence");
  }
  return CounterfactualPopulation(std::move(kept));
}

std::vector<std::string> CounterfactualPopulation::labels() const {
  std::vector<std::string> out;
  out.reserve(strata_.size());
  for (const auto& s : strata_) out.push_back(s.label);
  return out;
}

ValidatedPopulation validate_population(std::vector<CounterfactualStratum> strata) {
  std::vector<std::string> warnings;
  auto population = CounterfactualPopulation::validate(std::move(strata), &warnings);
  return ValidatedPopulation{std::move(population), std::move(warnings)};
}

AssignmentMechanism AssignmentMechanism::constant(const Probability& pi) {
  AssignmentMechanism m;
  m.global_ = pi;
  return m;
}

AssignmentMechanism AssignmentMechanism::per_stratum(
    const std::vector<std::pair<std::string, Probability>>& pis) {
  AssignmentMechanism m;
  for (const auto& [label, pi] : pis) m.set_stratum_constant(label, pi);
  return m;
}

void AssignmentMechanism::set(const std::string& label, int y0, int y1, const Probability& pi) {
  entries_[label][static_cast<size_t>(y0 * 2 + y1)] = pi;
}

void AssignmentMechanism::set_stratum_constant(const std::string& label, const Probability& pi) {
  entries_[label] = {pi, pi, pi, pi};
}

Probability AssignmentMechanism::pi(const std::string& label, int y0, int y1) const {
  if (auto it = entries_.find(label); it != entries_.end()) {
    if (const auto& slot = it->second[static_cast<size_t>(y0 * 2 + y1)]; slot.has_value()) {
      return *slot;
    }
  }
  if (global_.has_value()) return *global_;
  fail(ErrorCode::MechanismDomainError,
       "assignment mechanism undefined for stratum '" + label + "', y0=" + std::to_string(y0) +
           ", y1=" + std::to_string(y1));
}

bool AssignmentMechanism::covers(const CounterfactualPopulation& population) const {
  if (global_.has_value()) return true;
  for (const auto& stratum : population.strata()) {
    auto it = entries_.find(stratum.label);
    if (it == entries_.end()) return false;
    for (const auto& slot : it->second) {
      if (!slot.has_value()) return false;
    }
  }
  return true;
}

bool AssignmentMechanism::is_constant() const { return global_.has_value() && entries_.empty(); }

ObservationalTable ObservationalTable::validate(std::vector<ObservationalStratum> strata,
                                                std::vector<std::string>* warnings) {
  std::vector<ObservationalStratum> kept;
  Rational prevalence_sum = 0;
  std::vector<std::string> labels;
  for (auto& stratum : strata) {
    prevalence_sum += stratum.prevalence.value();
    labels.push_back(stratum.label);
    if (stratum.pA.value() == 0 && stratum.r1.has_value()) {
      fail(ErrorCode::InconsistentCell,
           "stratum '" + stratum.label + "' has r1 but Pr(A=1|V=v) = 0");
    }
    if (stratum.pA.value() == 1 && stratum.r0.has_value()) {
      fail(ErrorCode::InconsistentCell,
           "stratum '" + stratum.label + "' has r0 but Pr(A=0|V=v) = 0");
    }
    if (stratum.prevalence.value() == 0) {
      if (warnings != nullptr) {
        warnings->push_back("dropped stratum '" + stratum.label + "' with zero prevalence");
      }
      continue;
    }
    kept.push_back(std::move(stratum));
  }
  check_unique_labels(labels);
  if (prevalence_sum != 1) {
    fail(ErrorCode::PrevalenceSumError,
         "prevalences sum to " + format_rational(prevalence_sum) + ", expected 1");
  }
  if (kept.empty()) {
    fail(ErrorCode::EmptyPopulationError, "table has no stratum with positive prevalence");
  }
  return ObservationalTable(std::move(kept));
}

std::vector<std::string> ObservationalTable::labels() const {
  std::vector<std::string> out;
  out.reserve(strata_.size());
  for (const auto& s : strata_) out.push_back(s.label);
  return out;
}

const char* kind_name(EffectMeasureKind kind) {
  switch (kind) {
    case EffectMeasureKind::RiskDifference: return "rd";
    case EffectMeasureKind::RiskRatio: return "rr-minus";
    case EffectMeasureKind::SurvivalRatio: return "rr-plus";
    case EffectMeasureKind::InverseRiskRatio: return "inv-rr-minus";
    case EffectMeasureKind::InverseSurvivalRatio: return "inv-rr-plus";
    case EffectMeasureKind::OddsRatio: return "or";
  }
  return "?";
}

EffectMeasureKind kind_from_name(std::string_view name) {
  for (auto kind : kAllEffectMeasureKinds) {
    if (name == kind_name(kind)) return kind;
  }
  fail(ErrorCode::UnsupportedKind, "unknown effect measure '" + std::string(name) +
                                       "' (expected rd, rr-minus, rr-plus, inv-rr-minus, "
                                       "inv-rr-plus, or)");
}

RiskPair stratum_risks(const CounterfactualStratum& stratum) {
  return RiskPair{Probability(stratum.joint.risk0()), Probability(stratum.joint.risk1())};
}

RiskPair marginal_risks(const CounterfactualPopulation& population) {
  Rational r0 = 0;
  Rational r1 = 0;
  for (const auto& stratum : population.strata()) {
    r0 += stratum.prevalence.value() * stratum.joint.risk0();
    r1 += stratum.prevalence.value() * stratum.joint.risk1();
  }
  return RiskPair{Probability(r0), Probability(r1)};
}

Rational effect_value(EffectMeasureKind kind, const RiskPair& risks) {
  const Rational r0 = risks.r0.value();
  const Rational r1 = risks.r1.value();
  auto undefined = [&](const char* which) -> Rational {
    fail(ErrorCode::UndefinedMeasure, std::string(kind_name(kind)) + " undefined: requires " +
                                          which);
  };
  switch (kind) {
    case EffectMeasureKind::RiskDifference:
      return r1 - r0;
    case EffectMeasureKind::RiskRatio:
      if (r0 == 0) return undefined("r0 > 0");
      return r1 / r0;
    case EffectMeasureKind::SurvivalRatio:
      if (r0 == 1) return undefined("r0 < 1");
      return (1 - r1) / (1 - r0);
    case EffectMeasureKind::InverseRiskRatio:
      if (r1 == 0) return undefined("r1 > 0");
      return r0 / r1;
    case EffectMeasureKind::InverseSurvivalRatio:
      if (r1 == 1) return undefined("r1 < 1");
      return (1 - r0) / (1 - r1);
    case EffectMeasureKind::OddsRatio:
      if (r0 == 0 || r0 == 1) return undefined("0 < r0 < 1");
      if (r1 == 0 || r1 == 1) return undefined("0 < r1 < 1");
      return (r1 / (1 - r1)) / (r0 / (1 - r0));
  }
  fail(ErrorCode::UnsupportedKind, "unhandled effect measure kind");
}

std::optional<Rational> try_effect_value(EffectMeasureKind kind, const RiskPair& risks,
                                         std::string* note) {
  try {
    return effect_value(kind, risks);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedMeasure) throw;
    if (note != nullptr) *note = e.what();
    return std::nullopt;
  }
}

std::vector<StratumValue> stratum_effects(EffectMeasureKind kind,
                                          const CounterfactualPopulation& population) {
  std::vector<StratumValue> out;
  out.reserve(population.strata().size());
  for (const auto& stratum : population.strata()) {
    std::string note;
    auto value = try_effect_value(kind, stratum_risks(stratum), &note);
    out.push_back(StratumValue{stratum.label, std::move(value), std::move(note)});
  }
  return out;
}

Rational marginal_effect(EffectMeasureKind kind, const CounterfactualPopulation& population) {
  return effect_value(kind, marginal_risks(population));
}

ObservationalTable apply_assignment(const CounterfactualPopulation& population,
                                    const AssignmentMechanism& mechanism) {
  std::vector<ObservationalStratum> rows;
  rows.reserve(population.strata().size());
  for (const auto& stratum : population.strata()) {
    const auto& j = stratum.joint;
    const Rational pi00 = mechanism.pi(stratum.label, 0, 0).value();
    const Rational pi01 = mechanism.pi(stratum.label, 0, 1).value();
    const Rational pi10 = mechanism.pi(stratum.label, 1, 0).value();
    const Rational pi11 = mechanism.pi(stratum.label, 1, 1).value();

    const Rational pA = j.q00.value() * pi00 + j.q01.value() * pi01 + j.q10.value() * pi10 +
                        j.q11.value() * pi11;

    ObservationalStratum row;
    row.label = stratum.label;
    row.prevalence = stratum.prevalence;
    row.pA = Probability(pA);
    if (pA > 0) {
      // Pr(Y=1 | A=1, V=v): among the exposed, Y = Y^{a=1} by consistency.
      const Rational exposed_cases = j.q01.value() * pi01 + j.q11.value() * pi11;
      row.r1 = Probability(exposed_cases / pA);
    }
    if (pA < 1) {
      const Rational unexposed_cases = j.q10.value() * (1 - pi10) + j.q11.value() * (1 - pi11);
      row.r0 = Probability(unexposed_cases / (1 - pA));
    }
    rows.push_back(std::move(row));
  }
  return ObservationalTable::validate(std::move(rows));
}

namespace {

// Accumulates Pr(A=1, Y^a=y) and Pr(Y^a=y) style sums so the comparison
// Pr(A=1 | Y^a=1) = Pr(A=1 | Y^a=0) can be done by cross-multiplication.
struct GroupSums {
  Rational mass_y1 = 0;      // Pr(Y^a=1 [, V=v])
  Rational exposed_y1 = 0;   // Pr(A=1, Y^a=1 [, V=v])
  Rational mass_y0 = 0;
  Rational exposed_y0 = 0;

  // Vacuously true when either conditioning event has probability zero.
  bool balanced() const {
    if (mass_y1 == 0 || mass_y0 == 0) return true;
    return exposed_y1 * mass_y0 == exposed_y0 * mass_y1;
  }
};

GroupSums stratum_sums(const CounterfactualStratum& stratum, const AssignmentMechanism& mechanism,
                       int a) {
  const auto& j = stratum.joint;
  GroupSums sums;
  for (int y0 = 0; y0 <= 1; ++y0) {
    for (int y1 = 0; y1 <= 1; ++y1) {
      const Probability* cell = nullptr;
      if (y0 == 0 && y1 == 0) cell = &j.q00;
      if (y0 == 0 && y1 == 1) cell = &j.q01;
      if (y0 == 1 && y1 == 0) cell = &j.q10;
      if (y0 == 1 && y1 == 1) cell = &j.q11;
      const Rational mass = cell->value();
      const Rational exposed = mass * mechanism.pi(stratum.label, y0, y1).value();
      const int ya = (a == 0) ? y0 : y1;
      if (ya == 1) {
        sums.mass_y1 += mass;
        sums.exposed_y1 += exposed;
      } else {
        sums.mass_y0 += mass;
        sums.exposed_y0 += exposed;
      }
    }
  }
  return sums;
}

}  // namespace

ExchangeabilityFlags check_conditional_exchangeability(const CounterfactualPopulation& population,
                                                       const AssignmentMechanism& mechanism) {
  ExchangeabilityFlags flags{true, true};
  for (const auto& stratum : population.strata()) {
    if (!stratum_sums(stratum, mechanism, 0).balanced()) flags.a0 = false;
    if (!stratum_sums(stratum, mechanism, 1).balanced()) flags.a1 = false;
  }
  return flags;
}

ExchangeabilityFlags check_marginal_exchangeability(const CounterfactualPopulation& population,
                                                    const AssignmentMechanism& mechanism) {
  ExchangeabilityFlags flags;
  for (int a = 0; a <= 1; ++a) {
    GroupSums total;
    for (const auto& stratum : population.strata()) {
      const GroupSums sums = stratum_sums(stratum, mechanism, a);
      const Rational p = stratum.prevalence.value();
      total.mass_y1 += p * sums.mass_y1;
      total.exposed_y1 += p * sums.exposed_y1;
      total.mass_y0 += p * sums.mass_y0;
      total.exposed_y0 += p * sums.exposed_y0;
    }
    (a == 0 ? flags.a0 : flags.a1) = total.balanced();
  }
  return flags;
}

}  // namespace collapsekit
