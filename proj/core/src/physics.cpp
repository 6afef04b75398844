#include "vempb/physics.hpp"

#include "vempb/error.hpp"

#include <sstream>

namespace vempb {

namespace {

constexpr double kSingularRadius = 1e-14;

[[noreturn]] void singular(const Vec3& x, std::size_t i) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "Coulomb term evaluated at charge " << i << " (x = " << x.transpose() << ")";
  throw SingularityError(msg.str());
}

}  // namespace

void PhysicsConfig::validate() const {
  if (!(eps_m > 0.0) || !(eps_s > 0.0)) throw ConfigError("permittivities eps_m and eps_s must be positive");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be non-negative");
  for (std::size_t i = 0; i < charges.size(); ++i) {
    if (!in_molecule(charges[i].position)) {
      throw ConfigError("charge " + std::to_string(i) + " lies outside the molecular region");
    }
  }
}

double PhysicsConfig::coulomb(const Vec3& x) const {
  double g = 0.0;
  for (std::size_t i = 0; i < charges.size(); ++i) {
    const double r = (x - charges[i].position).norm();
    if (r < kSingularRadius) singular(x, i);
    g += charges[i].strength / (eps_m * r);
  }
  return g;
}

Vec3 PhysicsConfig::coulomb_gradient(const Vec3& x) const {
  Vec3 g = Vec3::Zero();
  for (std::size_t i = 0; i < charges.size(); ++i) {
    const Vec3 d = x - charges[i].position;
    const double r = d.norm();
    if (r < kSingularRadius) singular(x, i);
    g -= charges[i].strength / (eps_m * r * r * r) * d;
  }
  return g;
}

}  // namespace vempb
