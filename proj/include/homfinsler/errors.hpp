#pragma once

#include <stdexcept>
#include <string>

namespace homfinsler {

/// Malformed or unsupported input (bad family/rank, parse failures, bad counts).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical check failed; carries the offending residual.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Curvature formula preconditions do not hold for the requested flag.
class InapplicableFlag : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The fundamental tensor is not positive definite.
class ConvexityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace homfinsler
