#pragma once

#include <stdexcept>
#include <string>

namespace clustersense {

/// Thrown when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when an iterative solver exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clustersense
