#include "vempb/newton.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace vempb {

void NewtonConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("solver.rel_tol must be positive");
  if (!(abs_tol >= 0.0)) throw ConfigError("solver.abs_tol must be non-negative");
  if (max_iterations < 1) throw ConfigError("solver.max_iterations must be at least 1");
  if (max_halvings < 0) throw ConfigError("solver.max_halvings must be non-negative");
  if (!(cg_tol > 0.0)) throw ConfigError("solver.cg_tol must be positive");
}

NewtonResult newton_solve(const Discretization& disc, const LoadSpec& load, const NewtonConfig& config,
                          const BoundaryFunction& boundary) {
  return newton_solve(disc, disc.load(load), config, boundary);
}

NewtonResult newton_solve(const Discretization& disc, const Eigen::VectorXd& load, const NewtonConfig& config,
                          const BoundaryFunction& boundary) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = disc.num_dofs();
  const auto& mask = disc.dirichlet_mask();

  NewtonResult result;
  SolveReport& report = result.report;
  result.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (boundary) {
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) result.u[static_cast<Eigen::Index>(i)] = boundary(disc.mesh().vertex(i));
  }

  auto finish = [&](bool converged) {
    report.converged = converged;
    report.max_abs_u = result.u.size() > 0 ? result.u.cwiseAbs().maxCoeff() : 0.0;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto fail = [&](const std::string& why) {
    finish(false);
    throw NewtonError(why, result);
  };

  Eigen::VectorXd r;
  try {
    r = disc.residual(result.u, load);
  } catch (const DivergedStateError& e) {
    fail(std::string("initial state overflows the nonlinearity: ") + e.what());
  }
  double rnorm = r.norm();
  report.residual_history.push_back(rnorm);
  const double target = config.rel_tol * rnorm + config.abs_tol;
  if (rnorm <= target) {
    finish(true);
    return result;
  }

  const CgConfig cg{config.cg_tol, config.cg_max_iterations};
  for (int it = 1; it <= config.max_iterations; ++it) {
    SparseSystem system{disc.jacobian(result.u), -r, mask};
    apply_dirichlet(system);
    CgResult step;
    try {
      step = cg_solve(system.matrix, system.rhs, cg);
    } catch (const ConvergenceError& e) {
      fail(std::string("inner solve failed at Newton iteration ") + std::to_string(it) + ": " + e.what());
    }
    report.cg_iterations.push_back(step.iterations);

    double lambda = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    Eigen::VectorXd r_trial;
    for (int h = 0; h <= config.max_halvings; ++h) {
      if (h > 0) {
        lambda *= 0.5;
        ++report.damping_events;
      }
      trial = result.u + lambda * step.x;
      try {
        r_trial = disc.residual(trial, load);
      } catch (const DivergedStateError&) {
        continue;
      }
      if (r_trial.norm() < rnorm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "damping exhausted at Newton iteration " << it << " (residual " << rnorm << ")";
      fail(msg.str());
    }
    result.u = std::move(trial);
    r = std::move(r_trial);
    rnorm = r.norm();
    report.iterations = it;
    report.residual_history.push_back(rnorm);
    if (rnorm <= target) {
      finish(true);
      return result;
    }
  }
  std::ostringstream msg;
  msg << "Newton did not converge in " << config.max_iterations << " iterations (residual " << rnorm
      << ", target " << target << ")";
  fail(msg.str());
  return result;  // unreachable
}

}  // namespace vempb
