#include "vempb/forms.hpp"

#include "vempb/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace vempb {

ManufacturedSolution ManufacturedSolution::sine() {
  constexpr double pi = std::numbers::pi;
  return {"sine",
          [](const Vec3& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()) * std::sin(pi * x.z()); },
          [](const Vec3& x) {
            const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y()), sz = std::sin(pi * x.z());
            const double cx = std::cos(pi * x.x()), cy = std::cos(pi * x.y()), cz = std::cos(pi * x.z());
            return Vec3(pi * cx * sy * sz, pi * sx * cy * sz, pi * sx * sy * cz);
          },
          [](const Vec3& x) {
            return -3.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()) * std::sin(pi * x.z());
          }};
}

ManufacturedSolution ManufacturedSolution::zero() {
  return {"zero", [](const Vec3&) { return 0.0; }, [](const Vec3&) { return Vec3(Vec3::Zero()); },
          [](const Vec3&) { return 0.0; }};
}

ManufacturedSolution ManufacturedSolution::linear(double c0, const Vec3& g) {
  std::ostringstream name;
  name.precision(17);
  name << "linear(" << c0 << "," << g.x() << "," << g.y() << "," << g.z() << ")";
  return {name.str(), [c0, g](const Vec3& x) { return c0 + g.dot(x); }, [g](const Vec3&) { return g; },
          [](const Vec3&) { return 0.0; }};
}

ManufacturedSolution ManufacturedSolution::by_name(const std::string& name) {
  if (name == "sine") return sine();
  if (name == "zero") return zero();
  throw ConfigError("unknown manufactured solution '" + name + "' (expected sine or zero)");
}

void LoadSpec::validate() const {
  if (mode == Mode::regularized && solution) throw ConfigError("regularized load takes no manufactured solution");
  if (mode != Mode::regularized && !solution) throw ConfigError("load mode requires a manufactured solution");
}

std::string to_string(LoadSpec::Mode mode) {
  switch (mode) {
    case LoadSpec::Mode::regularized: return "regularized";
    case LoadSpec::Mode::manufactured: return "manufactured";
    case LoadSpec::Mode::pointwise: return "pointwise";
  }
  return "unknown";
}

LoadSpec::Mode parse_load_mode(const std::string& name) {
  if (name == "regularized") return LoadSpec::Mode::regularized;
  if (name == "manufactured") return LoadSpec::Mode::manufactured;
  if (name == "pointwise") return LoadSpec::Mode::pointwise;
  throw ConfigError("unknown load mode '" + name + "' (expected regularized, manufactured or pointwise)");
}

namespace {

std::int8_t subdomain_at(const QuadratureRule& rule, const PhysicsConfig& physics, std::size_t q) {
  if (!rule.subdomain.empty()) return rule.subdomain[q];
  return physics.in_molecule(rule.points[q]) ? -1 : 1;
}

Eigen::Vector4d linear_basis(const CellProjectors& proj, const Vec3& x) {
  const Vec3 s = (x - proj.basis.center()) / proj.basis.scale();
  return {1.0, s.x(), s.y(), s.z()};
}

double checked_argument(double arg, const Vec3& x) {
  if (!(std::abs(arg) <= kMaxExponentArgument)) {
    std::ostringstream msg;
    msg << "sinh argument " << arg << " at (" << x.transpose()
        << ") exceeds the representable range; damp the Newton update";
    throw DivergedStateError(msg.str());
  }
  return arg;
}

}  // namespace

double integrate_epsilon(const QuadratureRule& rule, const PhysicsConfig& physics) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * physics.epsilon(subdomain_at(rule, physics, q));
  return sum;
}

std::string to_string(Stabilization s) { return s == Stabilization::trace ? "trace" : "diameter"; }

Stabilization parse_stabilization(const std::string& name) {
  if (name == "trace") return Stabilization::trace;
  if (name == "diameter") return Stabilization::diameter;
  throw ConfigError("unknown stabilization '" + name + "' (expected trace or diameter)");
}

Eigen::MatrixXd local_stiffness(const CellProjectors& proj, double epsilon_integral, Stabilization stabilization) {
  const auto n = static_cast<Eigen::Index>(proj.num_dofs());
  const Eigen::MatrixXd remainder = Eigen::MatrixXd::Identity(n, n) - proj.dof_matrix * proj.pi_nabla;
  const Eigen::MatrixXd consistency = epsilon_integral * proj.grad.transpose() * proj.grad;
  const double sigma = stabilization == Stabilization::trace ? consistency.trace() / static_cast<double>(n)
                                                             : proj.diameter * epsilon_integral / proj.volume;
  return consistency + sigma * remainder.transpose() * remainder;
}

Eigen::MatrixXd local_stiffness(const CellProjectors& proj, const QuadratureRule& rule,
                                const PhysicsConfig& physics, Stabilization stabilization) {
  return local_stiffness(proj, integrate_epsilon(rule, physics), stabilization);
}

LocalNonlinear local_nonlinear(const CellProjectors& proj, const QuadratureRule& rule,
                               const PhysicsConfig& physics, const Eigen::VectorXd& u_local,
                               bool with_jacobian) {
  const Eigen::Vector4d coeffs = proj.pi0() * u_local;
  Eigen::Vector4d r = Eigen::Vector4d::Zero();
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double kb2 = physics.kappa_bar_sq(subdomain_at(rule, physics, q));
    if (kb2 == 0.0) continue;
    const Vec3& x = rule.points[q];
    const Eigen::Vector4d phi = linear_basis(proj, x);
    const double arg = checked_argument(coeffs.dot(phi) + physics.coulomb(x), x);
    const double w = rule.weights[q] * kb2;
    r += (w * std::sinh(arg)) * phi;
    if (with_jacobian) m.noalias() += (w * std::cosh(arg)) * phi * phi.transpose();
  }
  LocalNonlinear out;
  out.residual = proj.pi0().transpose() * r;
  if (with_jacobian) out.jacobian = proj.pi0().transpose() * m * proj.pi0();
  return out;
}

Eigen::VectorXd local_nonlinear_residual(const CellProjectors& proj, const QuadratureRule& rule,
                                         const PhysicsConfig& physics, const Eigen::VectorXd& u_local) {
  return local_nonlinear(proj, rule, physics, u_local, false).residual;
}

Eigen::MatrixXd local_nonlinear_jacobian(const CellProjectors& proj, const QuadratureRule& rule,
                                         const PhysicsConfig& physics, const Eigen::VectorXd& u_local) {
  return local_nonlinear(proj, rule, physics, u_local, true).jacobian;
}

Eigen::VectorXd local_load(const CellProjectors& proj, const QuadratureRule& rule, const PhysicsConfig& physics,
                           const LoadSpec& spec) {
  spec.validate();
  Vec3 flux = Vec3::Zero();           // pairs with the projected gradient of the test function
  Eigen::Vector4d mass = Eigen::Vector4d::Zero();  // pairs with Pi0 of the test function
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const std::int8_t sub = subdomain_at(rule, physics, q);
    const Vec3& x = rule.points[q];
    const double w = rule.weights[q];
    const double eps = physics.epsilon(sub);
    const double kb2 = physics.kappa_bar_sq(sub);
    switch (spec.mode) {
      case LoadSpec::Mode::regularized:
        if (eps != physics.eps_m) flux -= (w * (eps - physics.eps_m)) * physics.coulomb_gradient(x);
        break;
      case LoadSpec::Mode::manufactured: {
        flux += (w * eps) * spec.solution->gradient(x);
        if (kb2 != 0.0) {
          const double arg = checked_argument(spec.solution->value(x) + physics.coulomb(x), x);
          mass += (w * kb2 * std::sinh(arg)) * linear_basis(proj, x);
        }
        break;
      }
      case LoadSpec::Mode::pointwise: {
        double f = -eps * spec.solution->laplacian(x);
        if (kb2 != 0.0) f += kb2 * std::sinh(checked_argument(spec.solution->value(x) + physics.coulomb(x), x));
        mass += (w * f) * linear_basis(proj, x);
        break;
      }
    }
  }
  if (!flux.allFinite() || !mass.allFinite()) throw Error("non-finite load contribution");
  return proj.grad.transpose() * flux + proj.pi0().transpose() * mass;
}

}  // namespace vempb
