#pragma once

#include <stdexcept>
#include <string>

namespace hotrace {

/// Input outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A bound orbit does not exist (inverted trap, energy above a barrier).
class NoBoundStateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A degenerate configuration where a formula's denominator vanishes.
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A claimed mathematical property failed a numerical check.
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not implemented for the given parameters (e.g. closed form for alpha >= 4).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical estimate failed to reach its accuracy contract.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative kernel hit its iteration cap without converging.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time integration became unstable for the chosen step size.
class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hotrace
