#pragma once

#include "vempb/physics.hpp"
#include "vempb/projectors.hpp"
#include "vempb/quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>

namespace vempb {

/// Smooth field with gradient and Laplacian, used as an exact solution.
struct ManufacturedSolution {
  std::string name;
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<double(const Vec3&)> laplacian;

  /// sin(pi x) sin(pi y) sin(pi z); vanishes on the boundary of the unit cube.
  static ManufacturedSolution sine();
  static ManufacturedSolution zero();
  /// c0 + g . x
  static ManufacturedSolution linear(double c0, const Vec3& g);
  /// "sine" or "zero".
  static ManufacturedSolution by_name(const std::string& name);
};

/// Right-hand side of the discrete problem.
///  - regularized: the weak Coulomb correction  -((eps - eps_m) grad G, grad v);
///  - manufactured: a(u_ex, v) + (B(u_ex), v), making u_ex the exact weak solution;
///  - pointwise: (f, v) with f = -eps lap u_ex + kappa_bar^2 sinh(u_ex + G) evaluated pointwise.
struct LoadSpec {
  enum class Mode { regularized, manufactured, pointwise };

  Mode mode = Mode::regularized;
  std::optional<ManufacturedSolution> solution;

  static LoadSpec regularized() { return {}; }
  static LoadSpec manufactured(ManufacturedSolution u) { return {Mode::manufactured, std::move(u)}; }
  static LoadSpec pointwise(ManufacturedSolution u) { return {Mode::pointwise, std::move(u)}; }

  void validate() const;
};

std::string to_string(LoadSpec::Mode mode);
LoadSpec::Mode parse_load_mode(const std::string& name);

/// Largest |u + G| accepted by sinh/cosh before the state is declared diverged.
inline constexpr double kMaxExponentArgument = 700.0;

/// int_E eps dV by quadrature with pointwise branch selection.
double integrate_epsilon(const QuadratureRule& rule, const PhysicsConfig& physics);

/// Scaling of the dofi-dofi stabilization.
///  - trace: sigma = tr(K_c) / n_E, the mean diagonal of the consistency matrix K_c;
///  - diameter: sigma = h_E * (int_E eps) / |E|.
/// Both are proportional to eps and of order h_E; they differ by a shape-dependent factor.
enum class Stabilization { trace, diameter };

std::string to_string(Stabilization s);
Stabilization parse_stabilization(const std::string& name);

/// Stabilized VEM stiffness
///   K = K_c + sigma (I - D P)^T (I - D P),  K_c = (int_E eps) G^T G,
/// where G is the projected gradient and D P the polynomial part of the DoFs.
Eigen::MatrixXd local_stiffness(const CellProjectors& proj, double epsilon_integral,
                                Stabilization stabilization = Stabilization::trace);
Eigen::MatrixXd local_stiffness(const CellProjectors& proj, const QuadratureRule& rule,
                                const PhysicsConfig& physics, Stabilization stabilization = Stabilization::trace);

struct LocalNonlinear {
  Eigen::VectorXd residual;  ///< int kappa_bar^2 sinh(Pi u + G) Pi phi_i
  Eigen::MatrixXd jacobian;  ///< int kappa_bar^2 cosh(Pi u + G) Pi phi_j Pi phi_i (empty unless requested)
};

/// Throws DivergedStateError when |Pi u + G| exceeds kMaxExponentArgument at a node.
LocalNonlinear local_nonlinear(const CellProjectors& proj, const QuadratureRule& rule,
                               const PhysicsConfig& physics, const Eigen::VectorXd& u_local,
                               bool with_jacobian);
Eigen::VectorXd local_nonlinear_residual(const CellProjectors& proj, const QuadratureRule& rule,
                                         const PhysicsConfig& physics, const Eigen::VectorXd& u_local);
Eigen::MatrixXd local_nonlinear_jacobian(const CellProjectors& proj, const QuadratureRule& rule,
                                         const PhysicsConfig& physics, const Eigen::VectorXd& u_local);

Eigen::VectorXd local_load(const CellProjectors& proj, const QuadratureRule& rule, const PhysicsConfig& physics,
                           const LoadSpec& spec);

}  // namespace vempb
