#pragma once

#include "vempb/error.hpp"
#include "vempb/level_set.hpp"
#include "vempb/mesh.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <type_traits>
#include <vector>

namespace vempb {

inline constexpr int kMaxQuadratureDegree = 6;
inline constexpr int kDefaultQuadratureDegree = 4;

/// Positive-weight rule on the reference simplex (vertices 0, e_1, ..., e_dim).
struct ReferenceRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Collapsed Gauss-Jacobi rules, exact for polynomials of total degree <= `degree`.
const ReferenceRule& reference_tetrahedron_rule(int degree);
const ReferenceRule& reference_triangle_rule(int degree);

struct Triangle {
  std::array<Vec3, 3> v;
  double area() const { return 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm(); }
};

struct Tetrahedron {
  std::array<Vec3, 4> v;
  double signed_volume() const { return (v[1] - v[0]).dot((v[2] - v[0]).cross(v[3] - v[0])) / 6.0; }
};

/// Triangles oriented with the face normal: the face itself when it is a triangle,
/// otherwise a fan from the face centroid over the boundary edges.
std::vector<Triangle> triangulate_face(const PolyMesh& mesh, std::size_t face);

/// Cone from the cell centroid over the outward-oriented triangles of every face.
/// Throws MeshError if a simplex has non-positive volume (cell not star-shaped w.r.t. centroid).
std::vector<Tetrahedron> tetrahedralize_cell(const PolyMesh& mesh, std::size_t cell);

/// Points and weights of a quadrature over a cell or face. When a level set is attached,
/// `subdomain[q]` is -1 for phi(x_q) <= 0 (molecular region) and +1 otherwise.
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<std::int8_t> subdomain;
  int degree = 0;

  std::size_t size() const { return points.size(); }
  double measure() const;
};

QuadratureRule cell_quadrature(const PolyMesh& mesh, std::size_t cell, int degree = kDefaultQuadratureDegree);
QuadratureRule face_quadrature(const PolyMesh& mesh, std::size_t face, int degree = kDefaultQuadratureDegree);

void attach_level_set(QuadratureRule& rule, const LevelSet& phi);

/// sum_q w_q f(x_q) for scalar or Eigen-vector valued f. Throws Error naming the
/// node if f is not finite there.
template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using Value = std::decay_t<decltype(f(rule.points.front()))>;
  auto check = [](const Value& v) {
    if constexpr (std::is_arithmetic_v<Value>) {
      return std::isfinite(v);
    } else {
      return v.allFinite();
    }
  };
  Value sum{};
  if constexpr (!std::is_arithmetic_v<Value>) sum = Value::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Value v = f(rule.points[q]);
    if (!check(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite integrand at (" << rule.points[q].x() << ", " << rule.points[q].y() << ", "
          << rule.points[q].z() << ")";
      throw Error(msg.str());
    }
    sum += rule.weights[q] * v;
  }
  return sum;
}

}  // namespace vempb
