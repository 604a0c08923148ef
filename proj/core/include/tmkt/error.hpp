#pragma once

#include <stdexcept>
#include <string>

namespace tmkt {

/// Raised when a model is evaluated where it is undefined, e.g. the
/// ratio-dependent response at a*v + u == 0 away from the origin.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an operation's precondition is violated (unstable kinetic
/// matrix passed to a threshold search, malformed block structure, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The two countries' diffusion blocks differ, so the determinant
/// factorization of the four-species problem does not apply.
class EqualDiffusionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tmkt
