#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bcs {

/// Invalid or inconsistent configuration (bad keys, violated parameter orderings).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to deliver its contract.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of its subdivision budget.
class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, double best, double err)
      : NumericalError(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

/// Fixed-point iteration exhausted its budget.
class SolverError : public NumericalError {
public:
  SolverError(const std::string& what, double residual, std::vector<double> iterate)
      : NumericalError(what), last_residual(residual), last_iterate(std::move(iterate)) {}
  double last_residual;
  std::vector<double> last_iterate;
};

}  // namespace bcs
