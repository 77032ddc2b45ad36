#include "collapsekit/random_gen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace collapsekit {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw std::logic_error("SplitMix64::below(0)");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

namespace {

void validate_config(const GeneratorConfig& config) {
  if (config.stratum_count < 1) {
    fail(ErrorCode::InvalidConfig, "stratum_count must be >= 1");
  }
  if (config.denominator_bound < 2) {
    fail(ErrorCode::InvalidConfig, "denominator_bound must be >= 2");
  }
  if (config.denominator_bound < config.stratum_count) {
    fail(ErrorCode::InvalidConfig,
         "denominator_bound must be >= stratum_count to allow strictly positive prevalences");
  }
}

// Uniform composition of `total` into `parts` strictly positive integers
// (distinct cut points in [1, total-1]).
std::vector<long> positive_composition(SplitMix64& rng, long total, int parts) {
  std::set<long> cuts;
  while (static_cast<int>(cuts.size()) < parts - 1) {
    cuts.insert(1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(total - 1))));
  }
  std::vector<long> out;
  long previous = 0;
  for (long cut : cuts) {
    out.push_back(cut - previous);
    previous = cut;
  }
  out.push_back(total - previous);
  return out;
}

// Uniform composition of `total` into 4 nonnegative integers (sorted cut
// points in [0, total] with repetition).
std::array<long, 4> joint_composition(SplitMix64& rng, long total) {
  std::array<long, 3> cuts;
  for (auto& c : cuts) c = static_cast<long>(rng.below(static_cast<std::uint64_t>(total + 1)));
  std::sort(cuts.begin(), cuts.end());
  return {cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], total - cuts[2]};
}

bool interior(long numerator, long total) { return numerator >= 1 && numerator <= total - 1; }

JointDistribution random_joint(SplitMix64& rng, long bound, PopulationConstraint constraint) {
  const long total = 2 + static_cast<long>(rng.below(static_cast<std::uint64_t>(bound - 1)));
  std::array<long, 4> q{};  // q00, q01, q10, q11
  bool ok = false;
  for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
    q = joint_composition(rng, total);
    ok = constraint == PopulationConstraint::None ||
         (interior(q[2] + q[3], total) && interior(q[1] + q[3], total));
  }
  if (!ok) {
    // Interior margins by direct construction: the comonotone coupling of
    // risk0 = k/total and risk1 = m/total keeps every denominator <= bound.
    const long k = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(total - 1)));
    const long m = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(total - 1)));
    const long q11 = std::min(k, m);
    q = {total - k - m + q11, m - q11, k - q11, q11};
  }
  return JointDistribution{
      Probability(Rational(q[0], total)),
      Probability(Rational(q[1], total)),
      Probability(Rational(q[2], total)),
      Probability(Rational(q[3], total)),
  };
}

Probability random_interior_probability(SplitMix64& rng, long bound) {
  const long den = 2 + static_cast<long>(rng.below(static_cast<std::uint64_t>(bound - 1)));
  const long num = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(den - 1)));
  return Probability(Rational(num, den));
}

}  // namespace

CounterfactualPopulation random_population(const GeneratorConfig& config,
                                           PopulationConstraint constraint) {
  validate_config(config);
  SplitMix64 rng(config.seed);

  const int n = config.stratum_count;
  const long lo = std::max<long>(n, 2);
  const long total =
      lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(config.denominator_bound - lo + 1)));
  const std::vector<long> parts = positive_composition(rng, total, n);

  std::vector<CounterfactualStratum> strata;
  strata.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    strata.push_back(CounterfactualStratum{
        "s" + std::to_string(i + 1),
        Probability(Rational(parts[static_cast<size_t>(i)], total)),
        random_joint(rng, config.denominator_bound, constraint),
    });
  }
  return CounterfactualPopulation::validate(std::move(strata));
}

AssignmentMechanism random_mechanism(const GeneratorConfig& config,
                                     const CounterfactualPopulation& population) {
  validate_config(config);
  // Decorrelated stream so that mechanism draws do not replay population draws.
  SplitMix64 rng(config.seed ^ 0xD1B54A32D192ED03ULL);
  const long bound = config.denominator_bound;

  AssignmentMechanism mechanism;
  if (!config.confounded) {
    for (const auto& stratum : population.strata()) {
      mechanism.set_stratum_constant(stratum.label, random_interior_probability(rng, bound));
    }
    const auto flags = check_conditional_exchangeability(population, mechanism);
    if (!flags.both()) throw std::logic_error("unconfounded mechanism failed its own check");
    return mechanism;
  }

  if (bound < 3) {
    fail(ErrorCode::InvalidConfig,
         "confounded mechanisms need denominator_bound >= 3 for two distinct interior values");
  }
  bool any_interior_risk0 = false;
  for (const auto& stratum : population.strata()) {
    const Rational risk0 = stratum.joint.risk0();
    if (risk0 > 0 && risk0 < 1) {
      any_interior_risk0 = true;
      const long den = 3 + static_cast<long>(rng.below(static_cast<std::uint64_t>(bound - 2)));
      const long first = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(den - 1)));
      long second = first;
      for (int attempt = 0; attempt < 100 && second == first; ++attempt) {
        second = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(den - 1)));
      }
      if (second == first) second = first % (den - 1) + 1;
      for (int y1 = 0; y1 <= 1; ++y1) {
        mechanism.set(stratum.label, 0, y1, Probability(Rational(first, den)));
        mechanism.set(stratum.label, 1, y1, Probability(Rational(second, den)));
      }
    } else {
      mechanism.set_stratum_constant(stratum.label, random_interior_probability(rng, bound));
    }
  }
  if (!any_interior_risk0) {
    fail(ErrorCode::InvalidConfig,
         "confounded mechanism requires a stratum with 0 < risk0 < 1");
  }
  if (check_conditional_exchangeability(population, mechanism).a0) {
    throw std::logic_error("confounded mechanism failed to break exchangeability");
  }
  return mechanism;
}

WeightVector random_weight_vector(SplitMix64& rng, const std::vector<std::string>& labels,
                                  long denominator_bound) {
  std::vector<Rational> weights(labels.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    bool any_positive = false;
    for (auto& w : weights) {
      const long k = static_cast<long>(rng.below(static_cast<std::uint64_t>(denominator_bound + 1)));
      w = Rational(k, denominator_bound);
      if (k > 0) any_positive = true;
    }
    if (any_positive) return WeightVector::from_values(labels, weights);
  }
  weights.front() = 1;
  return WeightVector::from_values(labels, weights);
}

}  // namespace collapsekit
