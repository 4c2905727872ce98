#pragma once

#include <stdexcept>
#include <string>

namespace lwpr {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: edge lists, CSV files, out-of-range vertex ids.
class InputError : public Error {
 public:
  using Error::Error;
};

// Parameters that violate a model's constraints.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A call that breaks an operation's preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// A mathematical invariant failed at runtime; indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Canonicalization refused an input that is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A sampler exceeded its resource cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace lwpr
