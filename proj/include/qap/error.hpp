#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qap {

enum class ErrorKind {
  Validation,
  Singularity,
  ZeroFrequency,
  ZeroStiffness,
  Resonance,
  BlowUp,
  Degenerate,
  IncompleteGrid,
  LengthMismatch,
  FDFailure,
  NotConverged,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every numerical and configuration failure in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A trigonometric denominator fell below the singularity tolerance.
/// `factor()` names the offending expression, e.g. "cos(w0*(t-t0))".
class SingularityError : public Error {
 public:
  SingularityError(std::string factor, double value)
      : Error(ErrorKind::Singularity,
              "singular factor " + factor + " = " + std::to_string(value)),
        factor_(std::move(factor)),
        value_(value) {}

  const std::string& factor() const noexcept { return factor_; }
  double value() const noexcept { return value_; }

 private:
  std::string factor_;
  double value_;
};

}  // namespace qap
