#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sharpsens {

enum class ErrorCode {
  DegenerateCovariate,
  InvalidGamma,
  InvalidXNorm,
  NonFiniteLambda,
  DimensionMismatch,
  NonBinaryOutcome,
  UnpairedSample,
  InvalidSample,
  NonLatticeWeights,
  InvalidAlpha,
  InvalidBracket,
  TooLarge,
  InfeasibleExactMatch,
  SingularCovariance,
  ParseError,
  SchemaError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sharpsens
