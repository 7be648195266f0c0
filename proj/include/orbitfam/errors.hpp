#pragma once

#include <stdexcept>
#include <string>

namespace orbitfam {

/// Non-finite matrix entries, shape mismatches, malformed arguments.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A chart parameter or special-function argument outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was called on inputs that violate its mathematical precondition
/// (non-cyclic pair, v0 not H-fixed, theta outside the parameter space, ...).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A catalog or custom representation failed construction-time validation.
class InvalidRepresentation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation grid does not resolve the function space (rank deficient).
class GridTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Left translates are not expressible in the sampled basis.
class NotInvariant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature failed to converge or diverged where convergence was required.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbitfam
