#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace renyi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Matrix data that violates the invariants of the requested operator type.
class InvalidOperator : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A parameter outside the range where an operation is defined.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Quantity whose value is left undefined, e.g. a divergence of the zero operator.
class UndefinedInput : public Error {
public:
  using Error::Error;
};

/// A support inclusion supp(rho) <= supp(sigma) required by an operation fails.
class SupportViolation : public Error {
public:
  using Error::Error;
};

/// The range of a compression projection is empty.
class DegenerateScheme : public Error {
public:
  using Error::Error;
};

/// Malformed input file or field; the message names the file and the field path.
class InputError : public Error {
public:
  using Error::Error;
};

/// A tensor product would exceed the configured dimension cap.
class CapExceeded : public Error {
public:
  CapExceeded(std::size_t requested, std::size_t cap)
      : Error("tensor dimension " + std::to_string(requested) + " exceeds cap " +
              std::to_string(cap) + " (set RENYI_LAB_DIM_CAP to raise it)"),
        requested_(requested), cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t requested_;
  std::size_t cap_;
};

}  // namespace renyi
