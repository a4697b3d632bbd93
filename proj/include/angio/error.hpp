#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace angio {

enum class ErrorKind {
  InvalidParameter,
  NoPositiveSteadyState,
  DomainError,
  NoDensity,
  PoleError,
  Unsupported,
  DegenerateInput,
  ConditionFailure,
  OnAxisZero,
  NonConvergent,
  ContinuationStall,
  InconclusiveSign,
  BlowUp,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Usage-type errors (bad input) versus numerical failures; the CLI maps
// these to distinct exit codes.
bool is_usage_error(ErrorKind kind);

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw AnalysisError(kind, message);
}

}  // namespace angio
