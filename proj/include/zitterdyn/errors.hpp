#pragma once

#include <stdexcept>
#include <string>

namespace zitterdyn {

/// Precondition or usage violation. The CLI maps it to exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FailureKind {
  HistoryTooShort,
  NoBracket,
  NonConvergence,
  ModelViolation,
  MonotonicityViolation,
  SpeedLimit,
  ResidualTolerance,
  CertificationMismatch,
  ContourTooClose,
  NonIntegerWinding,
  WindowTooShort,
};

const char* to_string(FailureKind kind);

/// The numerics could not deliver a trustworthy answer. The CLI maps it to exit code 2.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(FailureKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  FailureKind kind() const noexcept { return kind_; }

 private:
  FailureKind kind_;
};

}  // namespace zitterdyn
