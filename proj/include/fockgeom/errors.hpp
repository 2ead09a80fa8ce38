#pragma once

#include <stdexcept>
#include <string>

namespace fockgeom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input validation failures. The CLI maps these to exit code 1.

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class InvalidMatrix : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A parameter lies outside |alpha| <= 2, |beta| <= 1.
class GuardRangeViolation : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

// Numerical guard failures. The CLI maps these to exit code 2.

/// Amplitude reached the top levels of the truncated space; raise the dimension.
class TruncationOverflow : public Error {
public:
  using Error::Error;
};

/// The Gauss factorization needs d != 0.
class DecompositionSingular : public Error {
public:
  using Error::Error;
};

class ConsistencyError : public Error {
public:
  using Error::Error;
};

inline bool is_numerical_guard_failure(const Error& e) {
  return dynamic_cast<const TruncationOverflow*>(&e) != nullptr ||
         dynamic_cast<const DecompositionSingular*>(&e) != nullptr ||
         dynamic_cast<const ConsistencyError*>(&e) != nullptr;
}

} // namespace fockgeom
