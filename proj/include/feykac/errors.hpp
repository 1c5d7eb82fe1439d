#pragma once

#include <stdexcept>
#include <string>

namespace feykac {

// Unknown catalog name or malformed catalog parameters.
class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric parameter outside its admissible range (zero steps, bad ordering, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation outside the mathematical domain of an operator (t <= 0 for a kernel, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Tensor quadrature requested in too many dimensions.
class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A solver detected a numerically invalid state while running.
class SolverDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace feykac
