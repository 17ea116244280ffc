#pragma once

#include <stdexcept>
#include <string>

namespace icpc {

// Bad inputs: parameter domain violations, malformed files, inconsistent
// datasets. The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures that arise while computing: rank deficiency, singular weight
// matrices, infeasible policy targets. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explicit time step too large for the current drift/diffusion magnitudes.
// The caller must shrink dt and retry.
class StabilityViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// No admissible policy coefficient attains the requested target.
class InfeasiblePolicy : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace icpc
