#pragma once

#include <stdexcept>
#include <string>

namespace compositum {

/// Bad caller input: violated precondition, unparsable expression, unsupported case.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal cross-check failed. Always a bug, never a user error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// A truncated comparison disagreed with its recomputation at doubled order.
class TruncationInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void invariant_failed(const std::string& what) {
  throw InvariantViolation(what);
}
}  // namespace detail

}  // namespace compositum
