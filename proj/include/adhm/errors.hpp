#pragma once

#include <stdexcept>
#include <string>

namespace adhm {

/// A caller violated an operation's precondition (off-level datum, singular
/// group element, non-Hermitian input, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shapes of the operands do not fit together. Always a caller bug.
class DimensionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A random sampler could not produce a datum with the requested properties
/// within its attempt budget.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested parameter value is outside what the construction supports.
class UnsupportedParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown at a specific point (e.g. fiber rank drops).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adhm
