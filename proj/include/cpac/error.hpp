#pragma once

#include <stdexcept>
#include <string>

namespace cpac {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hypothesis or class was queried outside the range where it is defined.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class EmptySample : public Error {
 public:
  EmptySample() : Error("empirical risk of an empty sample is undefined") {}
};

class EmptyClass : public Error {
 public:
  EmptyClass() : Error("hypothesis class is empty") {}
  using Error::Error;
};

// Parameters outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Every labeling of the tuple is realizable, so no d-witness exists for it.
class NoWitness : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed; always indicates a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace cpac
