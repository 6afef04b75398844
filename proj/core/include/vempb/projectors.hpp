#pragma once

#include "vempb/mesh.hpp"
#include "vempb/polybasis.hpp"

#include <Eigen/Core>

#include <vector>

namespace vempb {

// Lowest-order (k = 1) projectors. The local degrees of freedom are vertex values, in
// face-loop order for faces and in Cell::vertices order for cells. The degree is carried
// explicitly; only degree 1 is implemented.

/// Elliptic projection of a face function onto P_1(f), fixed by a zero boundary mean.
struct FaceProjector {
  int degree = 1;
  FaceFrame frame;
  MonomialBasis2 basis;          ///< centred at the face centroid, scaled by h_f
  Eigen::MatrixXd coefficients;  ///< basis.size() x n_vertices
  Eigen::RowVectorXd integral;   ///< row r with int_f v = r . dofs
  double area = 0.0;

  Eigen::VectorXd apply(const Eigen::VectorXd& dofs) const { return coefficients * dofs; }
  /// Value of the projected polynomial at a point of the face plane.
  double eval(const Eigen::VectorXd& dofs, const Vec3& x) const;
};

FaceProjector face_pi_nabla(const PolyMesh& mesh, std::size_t face, int degree = 1);

/// int_f v_h dS, equal to the integral of the face projection by the enhancement property.
double face_integral(const FaceProjector& projector, const Eigen::VectorXd& dofs);

/// Cell projectors acting on the cell's vertex values.
struct CellProjectors {
  int degree = 1;
  MonomialBasis3 basis;            ///< centred at x_E, scaled by h_E
  std::vector<int> vertices;       ///< global vertex ids in local DoF order
  double volume = 0.0;
  double diameter = 0.0;
  Eigen::MatrixXd pi_nabla;        ///< 4 x n: DoFs -> scaled-monomial coefficients
  Eigen::MatrixXd grad;            ///< 3 x n: DoFs -> constant gradient (Pi0 of grad v)
  Eigen::MatrixXd face_integrals;  ///< n_faces x n: rows give int_f v for each face of the cell
  Eigen::MatrixXd dof_matrix;      ///< n x 4: values of the basis at the cell vertices

  /// L2 projection onto P_1; coincides with pi_nabla on the enhanced space for k = 1.
  const Eigen::MatrixXd& pi0() const { return pi_nabla; }

  std::size_t num_dofs() const { return vertices.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& dofs) const { return pi_nabla * dofs; }
  /// (Pi v)(x) for given coefficients.
  double eval(const Eigen::VectorXd& coefficients, const Vec3& x) const;
  /// Cell-local DoF vector gathered from a global vector.
  Eigen::VectorXd gather(const Eigen::VectorXd& global) const;
};

CellProjectors cell_projectors(const PolyMesh& mesh, std::size_t cell, int degree = 1);

}  // namespace vempb
