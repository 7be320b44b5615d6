#pragma once

#include <stdexcept>
#include <string>

namespace countstable {

/// Argument outside the mathematical domain of an operation (t ∉ [0,2], a ∉ [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Conversion requested for the point mass at 0, which has no canonical compound form.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A left Poisson shift X ⊖ b that does not exist inside the family.
class LeftShiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters that fail validation where a valid law is required.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sample too small for a goodness-of-fit statistic.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Series expansion produced coefficients that cannot be a PMF.
class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace countstable
