// Core model: counterfactual populations over a stratifying covariate V,
// treatment-assignment mechanisms, observational tables, and the six
// effect-measure functionals. Everything is an immutable value and every
// operation is a pure function over exact rationals.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collapsekit/probability.hpp"

namespace collapsekit {

// Joint distribution of the two counterfactual outcomes (Y under a=0, Y
// under a=1) within one stratum. Field q{i}{j} is Pr(Y^{a=0}=i, Y^{a=1}=j).
struct JointDistribution {
  Probability q00, q01, q10, q11;

  Rational risk0() const { return q10.value() + q11.value(); }  // Pr(Y^{a=0}=1)
  Rational risk1() const { return q01.value() + q11.value(); }  // Pr(Y^{a=1}=1)
  Rational sum() const { return q00.value() + q01.value() + q10.value() + q11.value(); }

  // Product coupling with the given margins. Any coupling with the same
  // margins is equivalent for every effect-measure computation.
  static JointDistribution independent(const Probability& risk0, const Probability& risk1);

  bool operator==(const JointDistribution&) const = default;
};

struct RiskPair {
  Probability r0;  // risk under a=0
  Probability r1;  // risk under a=1

  bool operator==(const RiskPair&) const = default;
};

struct CounterfactualStratum {
  std::string label;
  Probability prevalence;  // Pr(V=v)
  JointDistribution joint;

  bool operator==(const CounterfactualStratum&) const = default;
};

// Validated list of strata: unique labels, prevalences summing to exactly 1,
// each joint summing to exactly 1. Zero-prevalence strata are dropped at
// validation with a warning since they contribute nothing to any marginal
// sum and would poison Bayes-rule denominators.
class CounterfactualPopulation {
 public:
  static CounterfactualPopulation validate(std::vector<CounterfactualStratum> strata,
                                           std::vector<std::string>* warnings = nullptr);

  const std::vector<CounterfactualStratum>& strata() const { return strata_; }
  std::vector<std::string> labels() const;

  bool operator==(const CounterfactualPopulation&) const = default;

 private:
  explicit CounterfactualPopulation(std::vector<CounterfactualStratum> strata)
      : strata_(std::move(strata)) {}

  std::vector<CounterfactualStratum> strata_;
};

// Treatment-assignment probabilities Pr(A=1 | V=v, Y^{a=0}=y0, Y^{a=1}=y1).
// A mechanism that ignores (y0, y1) within every stratum is exactly a
// conditionally exchangeable one; a globally constant mechanism is a
// randomized trial.
class AssignmentMechanism {
 public:
  static AssignmentMechanism constant(const Probability& pi);
  // Constant within each listed stratum.
  static AssignmentMechanism per_stratum(const std::vector<std::pair<std::string, Probability>>& pis);

  AssignmentMechanism() = default;

  void set(const std::string& label, int y0, int y1, const Probability& pi);
  void set_stratum_constant(const std::string& label, const Probability& pi);

  // Throws Error(MechanismDomainError) when no entry covers (label, y0, y1).
  Probability pi(const std::string& label, int y0, int y1) const;

  bool covers(const CounterfactualPopulation& population) const;
  bool is_constant() const;
  std::optional<Probability> global_constant() const { return global_; }
  const std::map<std::string, std::array<std::optional<Probability>, 4>>& entries() const {
    return entries_;
  }

  bool operator==(const AssignmentMechanism&) const = default;

 private:
  std::optional<Probability> global_;
  // index = y0*2 + y1; unset slots fall back to the global constant
  std::map<std::string, std::array<std::optional<Probability>, 4>> entries_;
};

// One stratum of the observed joint f(A, Y): Pr(A=1|V=v) plus the outcome
// risks in the unexposed/exposed. A risk is absent when its conditioning
// event has probability zero.
struct ObservationalStratum {
  std::string label;
  Probability prevalence;
  Probability pA;                     // Pr(A=1 | V=v)
  std::optional<Probability> r0;      // Pr(Y=1 | A=0, V=v)
  std::optional<Probability> r1;      // Pr(Y=1 | A=1, V=v)

  bool operator==(const ObservationalStratum&) const = default;
};

class ObservationalTable {
 public:
  static ObservationalTable validate(std::vector<ObservationalStratum> strata,
                                     std::vector<std::string>* warnings = nullptr);

  const std::vector<ObservationalStratum>& strata() const { return strata_; }
  std::vector<std::string> labels() const;

  bool operator==(const ObservationalTable&) const = default;

 private:
  explicit ObservationalTable(std::vector<ObservationalStratum> strata)
      : strata_(std::move(strata)) {}

  std::vector<ObservationalStratum> strata_;
};

enum class EffectMeasureKind {
  RiskDifference,        // r1 - r0
  RiskRatio,             // r1 / r0
  SurvivalRatio,         // (1-r1) / (1-r0)
  InverseRiskRatio,      // r0 / r1
  InverseSurvivalRatio,  // (1-r0) / (1-r1)
  OddsRatio,             // [r1/(1-r1)] / [r0/(1-r0)]
};

inline constexpr std::array<EffectMeasureKind, 6> kAllEffectMeasureKinds = {
    EffectMeasureKind::RiskDifference,      EffectMeasureKind::RiskRatio,
    EffectMeasureKind::SurvivalRatio,       EffectMeasureKind::InverseRiskRatio,
    EffectMeasureKind::InverseSurvivalRatio, EffectMeasureKind::OddsRatio,
};

// Stable spellings used by the CLI and the JSON schemas:
// rd, rr-minus, rr-plus, inv-rr-minus, inv-rr-plus, or.
const char* kind_name(EffectMeasureKind kind);
EffectMeasureKind kind_from_name(std::string_view name);

// Per-stratum value with an undefined marker instead of a hard error, so
// stratified reports can display partial results.
struct StratumValue {
  std::string label;
  std::optional<Rational> value;
  std::string note;  // reason when undefined, empty otherwise

  bool defined() const { return value.has_value(); }
  bool operator==(const StratumValue&) const = default;
};

struct ExchangeabilityFlags {
  bool a0 = false;  // Y^{a=0} independent of A (given V for the conditional check)
  bool a1 = false;

  bool both() const { return a0 && a1; }
  bool operator==(const ExchangeabilityFlags&) const = default;
};

// --- operations -------------------------------------------------------------

struct ValidatedPopulation {
  CounterfactualPopulation population;
  std::vector<std::string> warnings;
};

ValidatedPopulation validate_population(std::vector<CounterfactualStratum> strata);

RiskPair stratum_risks(const CounterfactualStratum& stratum);

// Law of total probability over V, exactly.
RiskPair marginal_risks(const CounterfactualPopulation& population);

// Throws Error(UndefinedMeasure) naming the failing denominator.
Rational effect_value(EffectMeasureKind kind, const RiskPair& risks);

// Marker-carrying variant used by list-returning operations.
std::optional<Rational> try_effect_value(EffectMeasureKind kind, const RiskPair& risks,
                                         std::string* note = nullptr);

std::vector<StratumValue> stratum_effects(EffectMeasureKind kind,
                                          const CounterfactualPopulation& population);

Rational marginal_effect(EffectMeasureKind kind, const CounterfactualPopulation& population);

// Generates the observed table: pA_v by total probability over the joint,
// outcome risks by Bayes rule within each stratum, linked by consistency
// (Y = Y^A). Cells with zero-probability conditioning events come out absent.
ObservationalTable apply_assignment(const CounterfactualPopulation& population,
                                    const AssignmentMechanism& mechanism);

// Within every stratum, compares Pr(A=1 | Y^a=1, V=v) with
// Pr(A=1 | Y^a=0, V=v); zero-probability conditioning events are vacuously
// satisfied. Flag per a in {0, 1}.
ExchangeabilityFlags check_conditional_exchangeability(const CounterfactualPopulation& population,
                                                       const AssignmentMechanism& mechanism);

// Same comparison with the stratum mixture collapsed over V.
ExchangeabilityFlags check_marginal_exchangeability(const CounterfactualPopulation& population,
                                                    const AssignmentMechanism& mechanism);

}  // namespace collapsekit
