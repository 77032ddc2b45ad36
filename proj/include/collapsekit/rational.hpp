// Exact rational arithmetic: the numeric foundation of the toolkit.
//
// All quantities in the library are arbitrary-precision rationals so that
// algebraic identities can be asserted as exact equalities. Arithmetic is
// delegated to boost::multiprecision; parsing and rendering live here so the
// accepted grammar and the canonical output form stay under our control.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace collapsekit {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::backends::cpp_int_backend<>, mp::et_off>;
using Rational =
    mp::number<mp::backends::rational_adaptor<mp::backends::cpp_int_backend<>>,
               mp::et_off>;

enum class Rounding {
  HalfUp,    // ties round away from zero
  Truncate,  // toward zero
};

// Accepts "p/q" fractions, integers, and decimal literals with an optional
// exponent ("3/4", "-2", "0.75", "1.5e-3"). Decimals are converted exactly.
// Throws Error(ParseError) on anything else; "p/0" is a parse error.
Rational parse_rational(std::string_view text);

// Canonical form: lowest terms, "p/q" with "/1" omitted ("3/4", "-2", "0").
std::string format_rational(const Rational& value);

// Fixed-point decimal rendering with `places` fractional digits.
std::string to_decimal_string(const Rational& value, int places,
                              Rounding mode = Rounding::HalfUp);

double to_double(const Rational& value);

}  // namespace collapsekit
