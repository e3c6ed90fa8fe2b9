#pragma once

#include <stdexcept>
#include <string>

namespace wsauc {

/// Malformed or out-of-range input (sizes, ranges, non-finite values).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but the operation degenerates on it, e.g. trimming
/// that would leave an empty side.
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

/// The requested operation is not defined for the given argument kind
/// (gradient of the 0-1 loss).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Divergence or an undefined numerical quantity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsauc
