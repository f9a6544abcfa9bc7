#pragma once

#include <stdexcept>
#include <string>

namespace susyhom {

// Malformed input: bad files, mismatched modes, invalid parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented promise of the input does not hold (empty sector, density
// floor, non-projector clause, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size cap (modes, dense dimension, statevector) was exceeded.
class CapExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A numerical routine failed or two routes to the same quantity disagree.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace susyhom
