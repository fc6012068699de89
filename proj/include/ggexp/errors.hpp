#pragma once

#include <stdexcept>
#include <string>

namespace ggexp {

/// Argument outside the mathematical domain of an operation (|t| > 1, p <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Structurally invalid argument (zero-point rule, empty checkpoint list, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integrand produced a non-finite value at a quadrature node.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double node)
      : std::runtime_error(what), node_(node) {}
  double node() const noexcept { return node_; }

 private:
  double node_;
};

/// Successive quadrature refinements never agreed within tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace ggexp
