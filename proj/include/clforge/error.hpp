#pragma once

#include <stdexcept>
#include <string>

namespace clforge {

enum class ErrorCode {
  UnsupportedParameter,
  BadPolynomial,
  TooLarge,
  DivisionByZero,
  DomainError,
  ConstructionViolation,
  NondegeneracyViolation,
  NotALine,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedParameter: return "UnsupportedParameter";
    case ErrorCode::BadPolynomial: return "BadPolynomial";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConstructionViolation: return "ConstructionViolation";
    case ErrorCode::NondegeneracyViolation: return "NondegeneracyViolation";
    case ErrorCode::NotALine: return "NotALine";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clforge
