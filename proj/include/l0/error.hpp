#pragma once

#include <stdexcept>
#include <string>

namespace l0 {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type to its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

// Malformed input: bad records, mismatched algebras, out-of-range values.
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

// Capacity limits (atom counts, family sizes) are input errors too.
class CapacityError : public InputError {
 public:
  using InputError::InputError;
};

// A mathematical precondition of an operation does not hold
// (e.g. greedy extraction on a non-submodular function).
class PreconditionError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

// A user-level assertion (script `assert`) evaluated to false.
class AssertionFailure : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

// A certificate or postcondition replay failed. Always a bug.
class VerificationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

}  // namespace l0
