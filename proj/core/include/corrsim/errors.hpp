#pragma once

#include <stdexcept>
#include <string>

namespace corrsim {

// Base for all library errors; everything thrown on purpose derives from this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed in arguments that violate a documented precondition
// (dimension mismatch, bad probability vector, malformed file, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Index set out of range or malformed (duplicates, not strictly increasing).
class IndexError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A requested operator would exceed the configured ambient-dimension cap.
class DimensionCapError : public Error {
 public:
  using Error::Error;
};

// A state id string does not name any known fixture.
class UnknownStateError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed after construction (numerical contract broke).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Filesystem / stream failure while reading or writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

// A protocol run hit a state it cannot proceed from (e.g. an empty typical
// subspace at the requested block length); the message carries diagnostics.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace corrsim
