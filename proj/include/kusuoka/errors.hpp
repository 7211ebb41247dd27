#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace kusuoka {

// Caller passed something that violates a precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input lies outside the domain of the operation, e.g. a non-PD matrix.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested enumeration exceeds the configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cylinder or product collapsed to zero.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_theta, double diameter, int iterations)
      : std::runtime_error(what), last_theta(last_theta), diameter(diameter), iterations(iterations) {}

  double last_theta;
  double diameter;
  int iterations;
};

class NondegeneracyError : public std::runtime_error {
 public:
  NondegeneracyError(const std::string& what, double gamma, Eigen::VectorXd c, Eigen::VectorXd e)
      : std::runtime_error(what), gamma(gamma), c(std::move(c)), e(std::move(e)) {}

  double gamma;
  Eigen::VectorXd c;
  Eigen::VectorXd e;
};

}  // namespace kusuoka
