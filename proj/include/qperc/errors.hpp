#pragma once

#include <stdexcept>
#include <string>

namespace qperc {

/// Input outside the model's domain (probabilities out of range, p + p_e > 1
/// under the additive convention, and so on).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity that is infinite at or above the percolation threshold.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A statistical estimator had nothing to work with.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration refused because the state space is too large.
class EnumerationLimitError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace qperc
