#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixpade {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (root pairing, near-zero division, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A factorization hit a zero (or non-positive, for Cholesky) pivot.
class FactorizationError : public NumericalError {
 public:
  FactorizationError(const std::string& what, std::ptrdiff_t pivot);
  std::ptrdiff_t pivot() const noexcept { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

/// Synthetic division of a load-coefficient polynomial left a remainder.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A declared load discontinuity falls strictly inside a time step.
class StepAlignmentError : public Error {
 public:
  using Error::Error;
};

/// A shifted system r^2 M + r dt C + dt^2 K could not be factored.
class PlanError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The integrated state became non-finite.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t step);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace mixpade
