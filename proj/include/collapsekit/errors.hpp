// Error taxonomy shared across the library. Every failure carries a stable
// code so callers (and the CLI exit-code mapping) can react without matching
// message text.
#pragma once

#include <stdexcept>
#include <string>

namespace collapsekit {

enum class ErrorCode {
  // Malformed input or requests.
  ParseError,
  PrevalenceSumError,
  JointSumError,
  DuplicateLabelError,
  EmptyPopulationError,
  InvalidProbability,
  InconsistentCell,
  MechanismDomainError,
  InputMismatch,
  UnknownScenario,
  UnsupportedKind,
  InvalidConfig,
  // Mathematically undefined results on well-formed input.
  UndefinedMeasure,
  NoGeneralWeights,
  DegenerateConditioningEvent,
  UndefinedStratumValue,
  AbsentCell,
  AllZeroWeights,
  ZeroDenominator,
};

const char* error_code_name(ErrorCode code);

// Input errors exit the CLI with status 1; undefined-result errors surface
// as a structured result and exit with status 2.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace collapsekit
