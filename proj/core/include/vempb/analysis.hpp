#pragma once

#include "vempb/forms.hpp"
#include "vempb/mesh.hpp"
#include "vempb/mesh_generators.hpp"
#include "vempb/quadrature.hpp"

#include <Eigen/Core>

#include <span>

namespace vempb {

struct ErrorNorms {
  double l2 = 0.0;  ///< sqrt(sum_E ||u_ex - Pi u_h||^2_{0,E})
  double h1 = 0.0;  ///< sqrt(sum_E |u_ex - Pi u_h|^2_{1,E})
};

/// Broken errors of the cellwise projection of u_h against an exact field.
ErrorNorms compute_errors(const PolyMesh& mesh, const Eigen::VectorXd& u_h, const ManufacturedSolution& exact,
                          int quadrature_degree = kDefaultQuadratureDegree);
double error_l2(const PolyMesh& mesh, const Eigen::VectorXd& u_h, const ManufacturedSolution& exact,
                int quadrature_degree = kDefaultQuadratureDegree);
double error_h1(const PolyMesh& mesh, const Eigen::VectorXd& u_h, const ManufacturedSolution& exact,
                int quadrature_degree = kDefaultQuadratureDegree);

/// Averaged mesh size (|Omega| / N_E)^(1/3).
double mesh_size(const PolyMesh& mesh);

/// log(e_fine / e_coarse) / log(h_fine / h_coarse). Throws Error for non-positive input
/// or h_fine >= h_coarse.
double convergence_order(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// Least-squares slope of log e against log h over the last `last` points (all when fewer).
double fitted_slope(std::span<const double> h, std::span<const double> e, std::size_t last = 3);

/// A solution on a structured mesh produced by generate_cube_mesh / generate_tet_mesh.
struct StructuredSolution {
  MeshFamily family;
  int n;
  const PolyMesh& mesh;
  const Eigen::VectorXd& u;
};

/// Errors of the coarse solution measured against the cellwise projection of a reference
/// solution on a nested refinement. Integration runs over the fine cells, each lying inside
/// a single coarse cell. Throws Error unless both levels belong to the same cubic or tet
/// family and the fine n is a multiple of the coarse n.
ErrorNorms compare_to_reference(const StructuredSolution& coarse, const StructuredSolution& reference,
                                int quadrature_degree = kDefaultQuadratureDegree);

}  // namespace vempb
