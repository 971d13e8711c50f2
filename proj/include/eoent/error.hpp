#pragma once

#include <stdexcept>
#include <string>

namespace eoent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented domain. `field()` names the offender.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// C >= 1 in the down-conversion branch: the linearized model no longer holds.
class InstabilityError : public Error {
 public:
  explicit InstabilityError(double cooperativity, const std::string& detail = {});
  double cooperativity() const noexcept { return cooperativity_; }

 private:
  double cooperativity_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Input outside the range where a fitted law was validated.
class RangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace eoent
