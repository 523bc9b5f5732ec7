#pragma once

#include <stdexcept>
#include <string>

namespace nsledger {

// Invalid user-supplied parameters or configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Grid too coarse for the requested spectrum, or spectral tail over threshold.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time step rejected by the integrator.
struct StepSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operands live on different grids.
struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Failure of an internal numerical procedure (divergent quadrature, bad fit).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nsledger
