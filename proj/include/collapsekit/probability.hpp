// Probability: an exact rational constrained to [0, 1].
#pragma once

#include "collapsekit/errors.hpp"
#include "collapsekit/rational.hpp"

namespace collapsekit {

// Construction validates the range; arithmetic happens on the underlying
// Rational (via the implicit conversion) and results are re-wrapped wherever
// a probability is required again.
class Probability {
 public:
  Probability() = default;  // zero

  Probability(Rational value) : value_(std::move(value)) {
    if (value_ < 0 || value_ > 1) {
      fail(ErrorCode::InvalidProbability,
           "probability out of [0,1]: " + format_rational(value_));
    }
  }

  Probability(int value) : Probability(Rational(value)) {}

  const Rational& value() const { return value_; }
  operator const Rational&() const { return value_; }

  Rational complement() const { return 1 - value_; }

  bool operator==(const Probability& other) const = default;

 private:
  Rational value_{};
};

}  // namespace collapsekit
