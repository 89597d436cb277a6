#pragma once

#include <stdexcept>
#include <string>

namespace iocost {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, violated preconditions, unknown ids.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed text input; the message carries the line number when known.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A request kind the price book has no class for.
class ClassificationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Integer accumulator overflow in byte, request or money arithmetic.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace iocost
