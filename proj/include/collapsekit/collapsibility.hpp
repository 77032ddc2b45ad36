// Collapsibility engine: weight schemes under which causal effect measures
// collapse over arbitrary baseline covariates, exact verification of both
// the associational and the causal definition of collapsibility, and the
// convex-combination feasibility test that decides whether collapsing
// weights can exist at all.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collapsekit/model.hpp"

namespace collapsekit {

// Nonnegative per-stratum weights, at least one positive. Weights are
// interpreted up to a positive scale; canonical constructors return them
// normalized to sum 1.
class WeightVector {
 public:
  struct Entry {
    std::string label;
    Rational weight;

    bool operator==(const Entry&) const = default;
  };

  static WeightVector validate(std::vector<Entry> entries);
  static WeightVector uniform(const std::vector<std::string>& labels);
  static WeightVector from_values(const std::vector<std::string>& labels,
                                  const std::vector<Rational>& weights);

  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  std::vector<std::string> labels() const;
  Rational total() const;
  WeightVector normalized() const;

  bool operator==(const WeightVector&) const = default;

 private:
  explicit WeightVector(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::vector<Entry> entries_;
};

struct CollapsibilityReport {
  enum class Definition { Causal, Associational };

  Definition definition = Definition::Causal;
  EffectMeasureKind kind = EffectMeasureKind::RiskDifference;
  std::vector<StratumValue> stratum_values;
  Rational marginal_value;
  WeightVector weights = WeightVector::validate({{"", 1}});
  Rational weighted_average;
  Rational residual;        // weighted_average - marginal_value
  bool collapsible = false; // residual == 0

  bool operator==(const CollapsibilityReport&) const = default;
};

struct FeasibilityEvidence {
  Rational min_value;
  Rational max_value;
  Rational marginal;

  bool operator==(const FeasibilityEvidence&) const = default;
};

// Feasible iff some nonnegative weighting of the stratum values averages to
// the marginal, i.e. iff the marginal lies in the closed interval spanned by
// the stratum values. Feasible results carry an exact witness.
struct FeasibilityResult {
  bool feasible = false;
  std::optional<WeightVector> witness;
  FeasibilityEvidence evidence;

  bool operator==(const FeasibilityResult&) const = default;
};

struct ConditionCheck {
  std::string name;
  bool holds = false;

  bool operator==(const ConditionCheck&) const = default;
};

struct NewmanWeights {
  WeightVector weights = WeightVector::validate({{"", 1}});
  std::vector<ConditionCheck> conditions;

  bool operator==(const NewmanWeights&) const = default;
};

// Side-by-side causal vs associational comparison for one measure.
struct ValueComparison {
  std::optional<Rational> causal;
  std::optional<Rational> associational;

  bool operator==(const ValueComparison&) const = default;
};

enum class ComparisonStatus { Equal, Differs, Skipped };

ComparisonStatus comparison_status(const ValueComparison& comparison);

struct StratumComparison {
  std::string label;
  ValueComparison values;

  bool operator==(const StratumComparison&) const = default;
};

struct KindComparison {
  EffectMeasureKind kind = EffectMeasureKind::RiskDifference;
  std::vector<StratumComparison> strata;
  ValueComparison marginal;
  bool agrees = true;  // no Differs among strata or marginal

  bool operator==(const KindComparison&) const = default;
};

struct DefEquivalenceReport {
  ExchangeabilityFlags conditional;
  ExchangeabilityFlags marginal;
  bool fully_exchangeable = false;
  std::vector<KindComparison> kinds;
  bool agrees = true;

  bool operator==(const DefEquivalenceReport&) const = default;
};

// --- operations -------------------------------------------------------------

// The universal weight schemes: covariate prevalence Pr(V=v) for the risk
// difference; Pr(V=v | conditioning counterfactual outcome) for the four
// risk-ratio variants. No such scheme exists for the odds ratio, which is
// reported as Error(NoGeneralWeights).
WeightVector causal_weights(EffectMeasureKind kind, const CounterfactualPopulation& population);

// Exact normalized weighted sum. Strata with zero weight and an undefined
// value are skipped; a positively weighted undefined value is an error.
Rational weighted_average(const std::vector<StratumValue>& values, const WeightVector& weights);
Rational weighted_average(const std::vector<Rational>& values, const std::vector<Rational>& weights);

// Definition-2 check: stratum-specific causal effects vs the marginal causal
// effect under the given weights (canonical weights when omitted).
CollapsibilityReport check_causal_collapsibility(EffectMeasureKind kind,
                                                 const CounterfactualPopulation& population,
                                                 std::optional<WeightVector> weights = std::nullopt);

// Definition-1 check on observed data: stratum-specific associational
// effects vs the marginal associational effect, the marginal table being the
// exact mixture of the strata.
CollapsibilityReport check_associational_collapsibility(EffectMeasureKind kind,
                                                        const ObservationalTable& table,
                                                        const WeightVector& weights);

// Marginal outcome risks of the observed joint: Pr(Y=1 | A=a).
// Throws when a needed cell is absent or Pr(A=a) = 0.
RiskPair marginal_associational_risks(const ObservationalTable& table);

// Associational weight schemes Pr(V=v|A=1)-based, with the probabilistic
// conditions under which they collapse. Supported kinds: rd, rr-minus, or.
NewmanWeights newman_weights(EffectMeasureKind kind, const ObservationalTable& table);

// Decides whether any nonnegative weights can average `values` to
// `marginal`. Witness construction is deterministic: uniform weights when
// all values are equal, otherwise the lowest-index two-point combination.
FeasibilityResult weight_feasibility(const std::vector<Rational>& values, const Rational& marginal);
FeasibilityResult weight_feasibility(const std::vector<std::string>& labels,
                                     const std::vector<Rational>& values, const Rational& marginal);

// Runs both exchangeability checks and compares associational with causal
// values for every measure, stratum-wise and marginally. Comparisons where
// either side is undefined are skipped, not failed.
DefEquivalenceReport def_equivalence_check(const CounterfactualPopulation& population,
                                           const AssignmentMechanism& mechanism);

}  // namespace collapsekit
