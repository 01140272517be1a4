#pragma once

#include <stdexcept>
#include <string>

namespace wielandt {

enum class ErrorKind {
  NonConvergence,
  NotPSD,
  InvalidExponent,
  Singular,
  DimensionMismatch,
  DimensionError,
  InvalidBounds,
  DegenerateBounds,
  PreconditionViolated,
  NonFinite,
  Format,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::InvalidBounds: return "InvalidBounds";
    case ErrorKind::DegenerateBounds: return "DegenerateBounds";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace wielandt
