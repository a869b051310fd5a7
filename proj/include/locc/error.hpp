#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace locc {

enum class ErrorKind {
  InvalidDimension,
  ShapeError,
  PreconditionViolation,
  NotSimultaneouslyDiagonalizable,
  UnsupportedDimension,
  ProtocolMismatch,
  StructureViolation,
  InvalidWitness,
  NotApplicable,
  InvalidChannel,
  InvalidState,
  InvalidSpec,
  EmptyReport,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::ShapeError: return "shape-error";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::NotSimultaneouslyDiagonalizable: return "not-simultaneously-diagonalizable";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::ProtocolMismatch: return "protocol-mismatch";
    case ErrorKind::StructureViolation: return "structure-violation";
    case ErrorKind::InvalidWitness: return "invalid-witness";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::InvalidChannel: return "invalid-channel";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::EmptyReport: return "empty-report";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ValidationError: return "validation-error";
  }
  return "unknown";
}

}  // namespace locc
