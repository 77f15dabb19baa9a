#pragma once

#include <stdexcept>
#include <string>

namespace n2v {

// Each subclass maps onto one stable CLI exit code (see tools/n2v.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A configuration value or argument violates its documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or unusable (bad record, missing slot, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite value.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace n2v
