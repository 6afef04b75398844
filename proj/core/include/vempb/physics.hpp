#pragma once

#include "vempb/level_set.hpp"
#include "vempb/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace vempb {

struct PointCharge {
  double strength = 1.0;  ///< scaled charge q~_i
  Vec3 position = Vec3::Zero();
};

/// Coefficients of the regularized Poisson-Boltzmann problem. Defaults are the benchmark
/// values eps_m = 2, eps_s = 80, kappa = 1/(20 sqrt 2), one unit charge at the origin and
/// the molecular box [0, 0.5]^3.
struct PhysicsConfig {
  double eps_m = 2.0;
  double eps_s = 80.0;
  double kappa = 1.0 / (20.0 * std::sqrt(2.0));
  std::vector<PointCharge> charges{PointCharge{}};
  LevelSet levelset = LevelSet::corner_box(0.5);

  /// Throws ConfigError unless eps_m, eps_s > 0, kappa >= 0 and every charge lies in the
  /// closed molecular region.
  void validate() const;

  /// phi(x) <= 0: points on the interface belong to the molecular region.
  bool in_molecule(const Vec3& x) const { return levelset(x) <= 0.0; }

  double epsilon(const Vec3& x) const { return in_molecule(x) ? eps_m : eps_s; }
  /// kappa_bar^2: 0 in the molecule, eps_s * kappa^2 in the solvent.
  double kappa_bar_sq(const Vec3& x) const { return in_molecule(x) ? 0.0 : eps_s * kappa * kappa; }

  /// Branch values for a quadrature subdomain tag (-1 molecular, +1 solvent).
  double epsilon(std::int8_t subdomain) const { return subdomain < 0 ? eps_m : eps_s; }
  double kappa_bar_sq(std::int8_t subdomain) const { return subdomain < 0 ? 0.0 : eps_s * kappa * kappa; }

  /// Coulomb part G(x) = sum_i (q_i / eps_m) / |x - x_i|. Throws SingularityError at a charge.
  double coulomb(const Vec3& x) const;
  /// grad G(x) = -sum_i (q_i / eps_m) (x - x_i) / |x - x_i|^3.
  Vec3 coulomb_gradient(const Vec3& x) const;
};

}  // namespace vempb
