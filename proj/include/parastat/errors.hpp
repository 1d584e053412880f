#pragma once

#include <stdexcept>
#include <string>

namespace parastat {

// Base class for every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or matrix of the wrong shape (e.g. an R-matrix payload that is not m^4 long).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Parameters that violate an algebraic constraint (lambda/c conditions, YBE, Hermiticity).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// Requested object does not fit the configured dimension budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Evaluation outside the domain of a formula (divergent series, beta <= 0 in F).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input the algorithms do not handle, such as an infinite local Hilbert space.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace parastat
