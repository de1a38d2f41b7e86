#pragma once

#include <stdexcept>
#include <string>

namespace minfinity {

// Exception hierarchy. The CLI maps each kind onto its exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatch, unknown field name, invalid config.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request whose numerical evaluation failed (outside domain, non-finite).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// a*exp(b) left the representable exponent range under the `error` policy.
class SaturationError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace minfinity
