#pragma once

#include <stdexcept>
#include <string>

namespace fermirep {

/// Requested mode count exceeds the configured capacity.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Bad index, size mismatch or parameter outside its domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates a structural requirement of a construction
/// (e.g. a generator with nonzero trace where traceless is required).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A commutator does not lie in the span of the generator set.
class ClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generator set is linearly dependent (singular Gram matrix).
class DependenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The conjugate sector coincides with the sector itself (n = 2m).
class DegeneracyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operator expression could not be parsed. Carries the 0-based column.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t column)
      : std::invalid_argument(what), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Reading or writing a matrix/report file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fermirep
