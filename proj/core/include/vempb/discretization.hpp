#pragma once

#include "vempb/forms.hpp"
#include "vempb/mesh.hpp"
#include "vempb/physics.hpp"
#include "vempb/projectors.hpp"
#include "vempb/quadrature.hpp"
#include "vempb/sparse.hpp"

#include <Eigen/Core>

#include <vector>

namespace vempb {

struct DiscretizationOptions {
  int quadrature_degree = kDefaultQuadratureDegree;
  Stabilization stabilization = Stabilization::trace;
};

/// Global VEM discretization over vertex DoFs: cached projectors, the assembled stiffness
/// matrix and the sparsity pattern shared by every global matrix.
///
/// Element contributions are computed in parallel and accumulated in cell order on the
/// calling thread, so results do not depend on the thread count.
class Discretization {
 public:
  Discretization(PolyMesh mesh, PhysicsConfig physics, DiscretizationOptions options = {});

  const PolyMesh& mesh() const { return mesh_; }
  const PhysicsConfig& physics() const { return physics_; }
  const DiscretizationOptions& options() const { return options_; }
  std::size_t num_dofs() const { return mesh_.num_vertices(); }
  const CellProjectors& projectors(std::size_t cell) const { return projectors_[cell]; }
  /// Boundary vertices, constrained by the Dirichlet condition.
  const std::vector<bool>& dirichlet_mask() const { return mesh_.boundary_vertices(); }

  /// Quadrature of one cell with subdomain tags from the level set. Rebuilt on demand.
  QuadratureRule quadrature(std::size_t cell) const;

  /// Unconstrained stiffness matrix A = sum_E scatter(K^E).
  const CsrMatrix& stiffness() const { return stiffness_; }
  /// Zero matrix with the global sparsity pattern.
  CsrMatrix empty_matrix() const;

  /// Load vector F.
  Eigen::VectorXd load(const LoadSpec& spec) const;
  /// B_h(u): the assembled nonlinear term (zero when no cell sees the solvent or kappa = 0).
  Eigen::VectorXd nonlinear_residual(const Eigen::VectorXd& u) const;
  /// R(u) = A u + B_h(u) - F with Dirichlet rows zeroed.
  Eigen::VectorXd residual(const Eigen::VectorXd& u, const Eigen::VectorXd& load) const;
  /// A + B_h'(u), unconstrained.
  CsrMatrix jacobian(const Eigen::VectorXd& u) const;

  /// True when the nonlinear term can be non-zero somewhere.
  bool is_nonlinear() const { return !nonlinear_cells_.empty(); }

 private:
  template <class Local>
  void scatter_matrices(const std::vector<Local>& locals, CsrMatrix& target) const;
  void scatter_vectors(const std::vector<Eigen::VectorXd>& locals, Eigen::VectorXd& target) const;

  PolyMesh mesh_;
  PhysicsConfig physics_;
  DiscretizationOptions options_;
  std::vector<CellProjectors> projectors_;
  std::vector<int> nonlinear_cells_;                 ///< cells with solvent quadrature nodes
  std::vector<std::vector<std::size_t>> positions_;  ///< per cell: CSR slots of the n x n local block
  CsrMatrix pattern_;
  CsrMatrix stiffness_;
};

/// Free-function forms of the global operators.
CsrMatrix assemble_linear(const Discretization& disc);
Eigen::VectorXd assemble_residual(const Discretization& disc, const LoadSpec& spec, const Eigen::VectorXd& u);
CsrMatrix assemble_jacobian(const Discretization& disc, const Eigen::VectorXd& u);

}  // namespace vempb
