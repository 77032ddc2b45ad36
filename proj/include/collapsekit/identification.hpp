// Identification of collapsibility weights from observed data under
// exchangeability, Miettinen's standardized risk ratio, and the
// standardization route that sidesteps collapsibility entirely.
#pragma once

#include "collapsekit/collapsibility.hpp"
#include "collapsekit/model.hpp"

namespace collapsekit {

// Risk-ratio weights identified from observed data: proportional to
// Pr(Y=1|A=0,V=v) * Pr(V=v), returned normalized. Under conditional
// exchangeability for a=0 these equal the counterfactual weights
// Pr(V=v | Y^{a=0}=1); the constant Pr(Y^{a=0}=1) is factored out and never
// estimated.
WeightVector identify_rr_minus_weights(const ObservationalTable& table);

// Miettinen's weights Pr(V=v) * Pr(Y=1|A=0,V=v), normalized. Agrees exactly
// with identify_rr_minus_weights on every table.
WeightVector miettinen_weights(const ObservationalTable& table);

// Standardized risk ratio: exposed and unexposed risks each standardized to
// the total population's covariate distribution, then divided.
Rational miettinen_srr(const ObservationalTable& table);

// The pair (sum_v Pr(V=v) r0_v, sum_v Pr(V=v) r1_v).
RiskPair standardized_risks(const ObservationalTable& table);

// Applies any effect measure to the standardized risks. Valid for every
// measure, including the odds ratio, because it never averages
// stratum-specific effect values.
Rational standardized_effect(EffectMeasureKind kind, const ObservationalTable& table);

struct OutcomeStratum {
  std::string label;
  Probability prevalence;
  Probability event_probability;  // Pr(Y=1 | V=v)
};

// Weights Pr(V=v | Y=1) for standardizing to an all-unexposed target
// population, where Y = Y^{a=0} by consistency. Exact Bayes rule.
WeightVector unexposed_target_weights(const std::vector<OutcomeStratum>& strata);

}  // namespace collapsekit
