#include "vempb/projectors.hpp"

#include "vempb/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <string>

namespace vempb {

namespace {

void require_degree_one(int degree) {
  if (degree != 1) throw Error("projectors of degree " + std::to_string(degree) + " are not implemented");
}

}  // namespace

FaceProjector face_pi_nabla(const PolyMesh& mesh, std::size_t face, int degree) {
  require_degree_one(degree);
  const Face& f = mesh.face(face);
  if (f.area < 1e-14) throw Error("degenerate face " + std::to_string(face));

  const FaceFrame frame = FaceFrame::of(mesh, face);
  FaceProjector p{degree, frame, MonomialBasis2(Vec2::Zero(), f.diameter, degree), {}, {}, f.area};
  const std::size_t n = f.vertices.size();

  // Gradient from the boundary: |f| a = sum_e |e| nu_e (v_i + v_j) / 2 (trapezoid, exact on edges).
  Eigen::MatrixXd gradient = Eigen::MatrixXd::Zero(2, n);
  Eigen::RowVectorXd boundary_mean = Eigen::RowVectorXd::Zero(n);
  Vec2 boundary_first_moment = Vec2::Zero();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const Vec2 a = frame.to_local(mesh.vertex(f.vertices[i]));
    const Vec2 b = frame.to_local(mesh.vertex(f.vertices[j]));
    const Vec2 t = b - a;
    const double len = t.norm();
    const Vec2 nu_len(t.y(), -t.x());  // outward normal times |e| for a counter-clockwise loop
    gradient.col(i) += 0.5 * nu_len;
    gradient.col(j) += 0.5 * nu_len;
    boundary_mean[i] += 0.5 * len;
    boundary_mean[j] += 0.5 * len;
    boundary_first_moment += len * 0.5 * (a + b);
    perimeter += len;
  }
  gradient /= f.area;

  // Constant fixed by int_{boundary f} (v - Pi v) ds = 0; the frame origin is the centroid.
  p.coefficients.resize(3, n);
  p.coefficients.row(0) = (boundary_mean - boundary_first_moment.transpose() * gradient) / perimeter;
  p.coefficients.row(1) = f.diameter * gradient.row(0);
  p.coefficients.row(2) = f.diameter * gradient.row(1);
  p.integral = f.area * p.coefficients.row(0);
  return p;
}

double FaceProjector::eval(const Eigen::VectorXd& dofs, const Vec3& x) const {
  const Eigen::VectorXd c = apply(dofs);
  const Vec2 xi = frame.to_local(x);
  double v = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) v += c[i] * basis.eval(i, xi);
  return v;
}

double face_integral(const FaceProjector& projector, const Eigen::VectorXd& dofs) {
  return projector.integral.dot(dofs);
}

CellProjectors cell_projectors(const PolyMesh& mesh, std::size_t cell, int degree) {
  require_degree_one(degree);
  const Cell& c = mesh.cell(cell);
  CellProjectors p{degree, MonomialBasis3(c.centroid, c.diameter, degree), c.vertices, c.volume, c.diameter,
                   {}, {}, {}, {}};
  const std::size_t n = c.vertices.size();

  auto local_index = [&](int global) {
    return static_cast<int>(std::find(c.vertices.begin(), c.vertices.end(), global) - c.vertices.begin());
  };

  p.face_integrals = Eigen::MatrixXd::Zero(c.faces.size(), n);
  p.grad = Eigen::MatrixXd::Zero(3, n);
  Eigen::RowVectorXd boundary_integral = Eigen::RowVectorXd::Zero(n);
  Vec3 boundary_first_moment = Vec3::Zero();
  double boundary_area = 0.0;
  for (std::size_t k = 0; k < c.faces.size(); ++k) {
    const auto& cf = c.faces[k];
    const Face& f = mesh.face(cf.face);
    const FaceProjector fp = face_pi_nabla(mesh, cf.face, degree);
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
      p.face_integrals(k, local_index(f.vertices[i])) += fp.integral[i];
    }
    // Pi0(grad v) = 1/|E| sum_f n_f int_f v  (divergence theorem).
    const Vec3 outward = static_cast<double>(cf.sign) * f.normal;
    p.grad += outward * p.face_integrals.row(k);
    boundary_integral += p.face_integrals.row(k);
    boundary_first_moment += f.area * (f.centroid - c.centroid);
    boundary_area += f.area;
  }
  p.grad /= c.volume;

  // Pi v = c0 + grad . (x - x_E), with c0 fixed by int_{boundary E} (v - Pi v) dS = 0.
  p.pi_nabla.resize(4, n);
  p.pi_nabla.row(0) = (boundary_integral - boundary_first_moment.transpose() * p.grad) / boundary_area;
  p.pi_nabla.bottomRows(3) = c.diameter * p.grad;

  p.dof_matrix.resize(n, 4);
  for (std::size_t i = 0; i < n; ++i) p.dof_matrix.row(i) = p.basis.eval_all(mesh.vertex(c.vertices[i])).transpose();

  // Projecting the DoFs of a polynomial must return that polynomial.
  assert((p.pi_nabla * p.dof_matrix - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  return p;
}

double CellProjectors::eval(const Eigen::VectorXd& coefficients, const Vec3& x) const {
  const Vec3 s = (x - basis.center()) / basis.scale();
  return coefficients[0] + coefficients[1] * s.x() + coefficients[2] * s.y() + coefficients[3] * s.z();
}

Eigen::VectorXd CellProjectors::gather(const Eigen::VectorXd& global) const {
  Eigen::VectorXd local(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) local[i] = global[vertices[i]];
  return local;
}

}  // namespace vempb
