// Error taxonomy shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace manitv {

/// Base class of all manitv errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: invalid point representation, shape mismatch, bad flags.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Geometric preconditions violated: cut-locus pairs, degenerate geodesics.
class GeometryDomainError : public Error {
 public:
  using Error::Error;
};

/// File system / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed on-disk data; message names the offending line or byte offset.
class ParseError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace manitv
