#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cuspnorm {

enum class ErrorKind {
  NotUnimodular,
  InvalidPrimeSet,
  InternalSolveFailure,
  InvalidM,
  BudgetExceeded,
  ConfigError,
  OutOfRange,
  PrereqFailed,
  InfeasibleConstraints,
  UnboundedPolytope,
  InvalidArgument,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::InvalidPrimeSet: return "InvalidPrimeSet";
    case ErrorKind::InternalSolveFailure: return "InternalSolveFailure";
    case ErrorKind::InvalidM: return "InvalidM";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::PrereqFailed: return "PrereqFailed";
    case ErrorKind::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorKind::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error raised by every library module. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cuspnorm
