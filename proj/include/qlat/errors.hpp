#pragma once

#include <stdexcept>
#include <string>

namespace qlat {

/// Invalid model parameters or an operation called outside its domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (solver breakdown, non-finite output).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form coefficient denominators (eps - j*detuning) vanish.
class DegenerateDetuningError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// The closed form of chi hit a zero of its denominator.
class SingularDenominatorError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Fixed-step integration aborted; carries the time of failure.
class IntegrationError : public ComputationError {
 public:
  IntegrationError(const std::string& what, double time_ns)
      : ComputationError(what), time_ns_(time_ns) {}
  double time_ns() const noexcept { return time_ns_; }

 private:
  double time_ns_;
};

/// Iterative refinement did not settle; carries the last relative change.
class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : ComputationError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace qlat
