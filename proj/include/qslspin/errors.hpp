#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qslspin {

enum class ErrorCode {
  DivergentInput,
  InvalidParameter,
  InvalidSpin,
  DimensionMismatch,
  InvalidGrid,
  NotApplicable,
  DegenerateVector,
  NotClosed,
  NotPureState,
  InsufficientCoverage,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the scenario runner in particular) can map regime violations to
// applicability flags instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qslspin
