#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlkit {

enum class ErrorKind {
  UnassignedVariable,
  DivisionByZero,
  SyntaxError,
  DuplicateSymbol,
  UnsupportedRequirement,
  UnknownSymbol,
  ArityMismatch,
  UnassignedGoalFluent,
  SchemaError,
  NodeOutOfRange,
  InvalidGraph,
  DomainMismatch,
  ProblemNotSet,
  NodeBudgetExceeded,
  ModelNotCollected,
  NoWeights,
  DimensionMismatch,
  IoError,
  SchemaVersionMismatch,
  CorruptRegistry,
  MissingLabels,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnassignedVariable: return "UnassignedVariable";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::UnsupportedRequirement: return "UnsupportedRequirement";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnassignedGoalFluent: return "UnassignedGoalFluent";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::ProblemNotSet: return "ProblemNotSet";
    case ErrorKind::NodeBudgetExceeded: return "NodeBudgetExceeded";
    case ErrorKind::ModelNotCollected: return "ModelNotCollected";
    case ErrorKind::NoWeights: return "NoWeights";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorKind::CorruptRegistry: return "CorruptRegistry";
    case ErrorKind::MissingLabels: return "MissingLabels";
  }
  return "Unknown";
}

/// Every failure raised by the library. `what()` is prefixed with the kind
/// name so callers that only see the message can still tell errors apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace wlkit
