#pragma once

#include "vempb/discretization.hpp"
#include "vempb/error.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <vector>

namespace vempb {

struct NewtonConfig {
  double rel_tol = 1e-10;        ///< stop when ||R_k|| <= rel_tol ||R_0|| + abs_tol
  double abs_tol = 0.0;
  int max_iterations = 50;
  int max_halvings = 20;
  double cg_tol = 1e-12;         ///< relative residual of the inner solve
  std::size_t cg_max_iterations = 0;  ///< 0 selects 10 * N

  /// Throws ConfigError for non-positive tolerances or limits.
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  ///< ||R(u_k)||, starting with u_0
  std::vector<std::size_t> cg_iterations;
  int damping_events = 0;                ///< number of step halvings over the whole solve
  double wall_time = 0.0;                ///< seconds
  bool converged = false;
  double max_abs_u = 0.0;
};

struct NewtonResult {
  Eigen::VectorXd u;
  SolveReport report;
};

/// Newton failure. Carries the last accepted state and its report.
class NewtonError : public ConvergenceError {
 public:
  NewtonError(const std::string& message, NewtonResult partial)
      : ConvergenceError(message), partial_(std::move(partial)) {}
  const NewtonResult& partial() const noexcept { return partial_; }

 private:
  NewtonResult partial_;
};

using BoundaryFunction = std::function<double(const Vec3&)>;

/// Damped Newton iteration for R(u) = A u + B_h(u) - F = 0 from u_0 = 0 in the interior.
/// Boundary DoFs take the values of `boundary` (zero when empty) and stay fixed. The step
/// length is halved while ||R|| does not decrease or the state overflows the nonlinearity.
NewtonResult newton_solve(const Discretization& disc, const LoadSpec& load, const NewtonConfig& config = {},
                          const BoundaryFunction& boundary = {});
NewtonResult newton_solve(const Discretization& disc, const Eigen::VectorXd& load, const NewtonConfig& config = {},
                          const BoundaryFunction& boundary = {});

}  // namespace vempb
