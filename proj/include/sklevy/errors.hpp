#pragma once

#include <stdexcept>
#include <string>

namespace sklevy {

// Parameter outside its admissible domain (alpha, sigma, dt, eps, theta, ...).
class ParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Time grid is not strictly increasing, does not start at 0, or is not uniform
// where a uniform grid is required.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operands are incompatible (mismatched horizons, dimensions, grids).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Step size violates h <= eps/10.
class StiffnessError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class UnsupportedConvention : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sklevy
