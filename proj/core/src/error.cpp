#include "sharpsens/error.hpp"

namespace sharpsens {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateCovariate: return "DegenerateCovariate";
    case ErrorCode::InvalidGamma: return "InvalidGamma";
    case ErrorCode::InvalidXNorm: return "InvalidXNorm";
    case ErrorCode::NonFiniteLambda: return "NonFiniteLambda";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonBinaryOutcome: return "NonBinaryOutcome";
    case ErrorCode::UnpairedSample: return "UnpairedSample";
    case ErrorCode::InvalidSample: return "InvalidSample";
    case ErrorCode::NonLatticeWeights: return "NonLatticeWeights";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidBracket: return "InvalidBracket";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InfeasibleExactMatch: return "InfeasibleExactMatch";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sharpsens
