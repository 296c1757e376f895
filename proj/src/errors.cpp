#include "qslspin/errors.hpp"

namespace qslspin {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivergentInput: return "DivergentInput";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidSpin: return "InvalidSpin";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::DegenerateVector: return "DegenerateVector";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotPureState: return "NotPureState";
    case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace qslspin
