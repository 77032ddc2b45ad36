#include "collapsekit/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "collapsekit/errors.hpp"

namespace collapsekit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_unsigned_integer(std::string_view digits, std::string_view full) {
  if (!all_digits(digits)) {
    fail(ErrorCode::ParseError, "invalid rational literal: '" + std::string(full) + "'");
  }
  return Integer(std::string(digits));
}

Integer pow10(unsigned exponent) {
  Integer result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  // trim surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) fail(ErrorCode::ParseError, "empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) fail(ErrorCode::ParseError, "invalid rational literal: '" + std::string(text) + "'");

  Rational magnitude;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_unsigned_integer(s.substr(0, slash), text);
    Integer den = parse_unsigned_integer(s.substr(slash + 1), text);
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    magnitude = Rational(num, den);
  } else {
    // decimal literal: digits [. digits] [ (e|E) [sign] digits ]
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = s.substr(0, e);
      std::string_view exp = s.substr(e + 1);
      bool exp_neg = false;
      if (!exp.empty() && (exp.front() == '+' || exp.front() == '-')) {
        exp_neg = exp.front() == '-';
        exp.remove_prefix(1);
      }
      if (!all_digits(exp) || exp.size() > 4) {
        fail(ErrorCode::ParseError, "invalid exponent in '" + std::string(text) + "'");
      }
      exponent = std::strtol(std::string(exp).c_str(), nullptr, 10);
      if (exp_neg) exponent = -exponent;
    }
    std::string_view int_part = mantissa;
    std::string_view frac_part;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      int_part = mantissa.substr(0, dot);
      frac_part = mantissa.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
      fail(ErrorCode::ParseError, "invalid rational literal: '" + std::string(text) + "'");
    }
    Integer scaled = 0;
    if (!int_part.empty()) scaled = parse_unsigned_integer(int_part, text);
    if (!frac_part.empty()) {
      scaled = scaled * pow10(static_cast<unsigned>(frac_part.size())) +
               parse_unsigned_integer(frac_part, text);
    }
    magnitude = Rational(scaled, pow10(static_cast<unsigned>(frac_part.size())));
    if (exponent > 0) {
      magnitude *= Rational(pow10(static_cast<unsigned>(exponent)));
    } else if (exponent < 0) {
      magnitude /= Rational(pow10(static_cast<unsigned>(-exponent)));
    }
  }
  return negative ? Rational(-magnitude) : magnitude;
}

std::string format_rational(const Rational& value) {
  return value.str();  // boost renders lowest terms, "/1" omitted
}

std::string to_decimal_string(const Rational& value, int places, Rounding mode) {
  if (places < 0) places = 0;
  const bool negative = value < 0;
  const Integer num = negative ? Integer(-numerator(value)) : numerator(value);
  const Integer den = denominator(value);
  const Integer scale = pow10(static_cast<unsigned>(places));

  Integer scaled = num * scale;
  Integer q = scaled / den;
  const Integer r = scaled % den;
  if (mode == Rounding::HalfUp && 2 * r >= den) ++q;

  const Integer whole = q / scale;
  const Integer frac = q % scale;
  std::string out;
  if (negative && q != 0) out += '-';
  out += whole.str();
  if (places > 0) {
    std::string digits = frac.str();
    out += '.';
    out += std::string(static_cast<size_t>(places) - digits.size(), '0');
    out += digits;
  }
  return out;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PrevalenceSumError: return "PrevalenceSumError";
    case ErrorCode::JointSumError: return "JointSumError";
    case ErrorCode::DuplicateLabelError: return "DuplicateLabelError";
    case ErrorCode::EmptyPopulationError: return "EmptyPopulationError";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InconsistentCell: return "InconsistentCell";
    case ErrorCode::MechanismDomainError: return "MechanismDomainError";
    case ErrorCode::InputMismatch: return "InputMismatch";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UndefinedMeasure: return "UndefinedMeasure";
    case ErrorCode::NoGeneralWeights: return "NoGeneralWeights";
    case ErrorCode::DegenerateConditioningEvent: return "DegenerateConditioningEvent";
    case ErrorCode::UndefinedStratumValue: return "UndefinedStratumValue";
    case ErrorCode::AbsentCell: return "AbsentCell";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
  }
  return "UnknownError";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::PrevalenceSumError:
    case ErrorCode::JointSumError:
    case ErrorCode::DuplicateLabelError:
    case ErrorCode::EmptyPopulationError:
    case ErrorCode::InvalidProbability:
    case ErrorCode::InconsistentCell:
    case ErrorCode::MechanismDomainError:
    case ErrorCode::InputMismatch:
    case ErrorCode::UnknownScenario:
    case ErrorCode::UnsupportedKind:
    case ErrorCode::InvalidConfig:
      return true;
    default:
      return false;
  }
}

}  // namespace collapsekit
