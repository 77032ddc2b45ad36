// Seeded, platform-independent generation of random populations, assignment
// mechanisms, and weight vectors: the fuel for the exact-identity property
// suites. Identical seeds produce identical objects on every platform.
#pragma once

#include <cstdint>

#include "collapsekit/collapsibility.hpp"
#include "collapsekit/model.hpp"

namespace collapsekit {

// Generator algorithm identifier recorded in simulation output metadata.
inline constexpr const char* kGeneratorAlgorithm = "splitmix64";

// SplitMix64 (Steele, Lea & Flood). Chosen over std::mt19937 plus standard
// distributions because the C++ distributions are implementation-defined;
// this sequence is reproducible across compilers and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bias-free via rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

struct GeneratorConfig {
  int stratum_count = 2;         // >= 1
  long denominator_bound = 100;  // >= 2; every drawn rational is k/D with D <= bound
  bool confounded = false;
  std::uint64_t seed = 0;
};

enum class PopulationConstraint {
  None,
  // Every stratum has 0 < risk0 < 1 and 0 < risk1 < 1, so all six effect
  // measures and all four risk-ratio weight schemes are defined.
  InteriorRisks,
};

// Deterministic in (config, constraint). Prevalences are strictly positive
// and sum to exactly 1; joints are valid; all denominators stay within the
// configured bound.
CounterfactualPopulation random_population(const GeneratorConfig& config,
                                           PopulationConstraint constraint = PopulationConstraint::None);

// confounded=false: assignment constant in (y0, y1) within each stratum with
// values in (0, 1) — conditionally exchangeable by construction.
// confounded=true: assignment differs between y0=0 and y0=1 on every stratum
// with interior risk0, which is asserted to break the a=0 exchangeability
// check. Requires such a stratum to exist and denominator_bound >= 3.
AssignmentMechanism random_mechanism(const GeneratorConfig& config,
                                     const CounterfactualPopulation& population);

// Nonnegative weights k/denominator_bound with at least one positive entry.
WeightVector random_weight_vector(SplitMix64& rng, const std::vector<std::string>& labels,
                                  long denominator_bound);

}  // namespace collapsekit
