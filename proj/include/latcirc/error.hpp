#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latcirc {

enum class ErrorCode {
  NotAPoset,
  NoLub,
  NoGlb,
  NoBottom,
  NoTop,
  NonConvergence,
  ValueMapNotBijective,
  GateNotMonotone,
  GateNotBottomPreserving,
  ArityMismatch,
  UnknownValue,
  UnknownGate,
  SyntaxError,
  WidthMismatch,
  BudgetExceeded,
  PatternMismatch,
  NotCombinational,
  NotATrace,
  NotCombinationalCore,
  NotRealizable,
  DerivativeBudgetExceeded,
  SamplesNotMonotone,
  NotFunctionallyComplete,
  NotAPartialOrder,
  VerdictMismatch,
  Io,
};

std::string_view error_code_name(ErrorCode code);

/// Domain error carrying a stable code. The CLI prints `error: <code>: <what>`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace latcirc
