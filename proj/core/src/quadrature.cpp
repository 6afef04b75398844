#include "vempb/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <mutex>
#include <string>

namespace vempb {

namespace {

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Golub-Welsch for the weight (1 - x)^a on [-1, 1].
GaussRule gauss_jacobi(int m, double a) {
  const double b = 0.0;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    jacobi(k, k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < m) {
      const double kk = k + 1.0;
      const double t = 2.0 * kk + a + b;
      const double beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      jacobi(k, k + 1) = jacobi(k + 1, k) = std::sqrt(beta);
    }
  }
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussRule r;
  for (int i = 0; i < m; ++i) {
    r.x.push_back(eig.eigenvalues()[i]);
    const double v0 = eig.eigenvectors()(0, i);
    r.w.push_back(mu0 * v0 * v0);
  }
  return r;
}

int points_per_direction(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw Error("unsupported quadrature degree " + std::to_string(degree) + " (supported: 0.." +
                std::to_string(kMaxQuadratureDegree) + ")");
  }
  return degree / 2 + 1;
}

ReferenceRule make_tetrahedron_rule(int degree) {
  const int m = points_per_direction(degree);
  const auto gx = gauss_jacobi(m, 0.0);
  const auto gy = gauss_jacobi(m, 1.0);
  const auto gz = gauss_jacobi(m, 2.0);
  ReferenceRule rule;
  rule.degree = degree;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        rule.points.push_back({0.125 * (1.0 + gx.x[i]) * (1.0 - gy.x[j]) * (1.0 - gz.x[k]),
                               0.25 * (1.0 + gy.x[j]) * (1.0 - gz.x[k]), 0.5 * (1.0 + gz.x[k])});
        rule.weights.push_back(gx.w[i] * gy.w[j] * gz.w[k] / 64.0);
      }
  return rule;
}

ReferenceRule make_triangle_rule(int degree) {
  const int m = points_per_direction(degree);
  const auto gx = gauss_jacobi(m, 0.0);
  const auto gy = gauss_jacobi(m, 1.0);
  ReferenceRule rule;
  rule.degree = degree;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      rule.points.push_back({0.25 * (1.0 + gx.x[i]) * (1.0 - gy.x[j]), 0.5 * (1.0 + gy.x[j]), 0.0});
      rule.weights.push_back(gx.w[i] * gy.w[j] / 8.0);
    }
  return rule;
}

template <ReferenceRule (*Make)(int)>
const ReferenceRule& cached_rule(int degree) {
  static std::once_flag once;
  static std::vector<ReferenceRule> rules;
  std::call_once(once, [] {
    for (int d = 0; d <= kMaxQuadratureDegree; ++d) rules.push_back(Make(d));
  });
  points_per_direction(degree);  // validates
  return rules[degree];
}

}  // namespace

const ReferenceRule& reference_tetrahedron_rule(int degree) { return cached_rule<make_tetrahedron_rule>(degree); }
const ReferenceRule& reference_triangle_rule(int degree) { return cached_rule<make_triangle_rule>(degree); }

std::vector<Triangle> triangulate_face(const PolyMesh& mesh, std::size_t face) {
  const Face& f = mesh.face(face);
  const std::size_t m = f.vertices.size();
  std::vector<Triangle> tris;
  if (m == 3) {
    tris.push_back({{mesh.vertex(f.vertices[0]), mesh.vertex(f.vertices[1]), mesh.vertex(f.vertices[2])}});
    return tris;
  }
  tris.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    tris.push_back({{f.centroid, mesh.vertex(f.vertices[i]), mesh.vertex(f.vertices[(i + 1) % m])}});
  }
  return tris;
}

std::vector<Tetrahedron> tetrahedralize_cell(const PolyMesh& mesh, std::size_t cell) {
  const Cell& c = mesh.cell(cell);
  std::vector<Tetrahedron> tets;
  for (const auto& cf : c.faces) {
    for (const auto& t : triangulate_face(mesh, cf.face)) {
      Tetrahedron tet = cf.sign > 0 ? Tetrahedron{{c.centroid, t.v[0], t.v[1], t.v[2]}}
                                    : Tetrahedron{{c.centroid, t.v[0], t.v[2], t.v[1]}};
      if (!(tet.signed_volume() > 0.0)) {
        throw MeshError("cell " + std::to_string(cell) + " is not star-shaped w.r.t. its centroid",
                        static_cast<int>(cell));
      }
      tets.push_back(tet);
    }
  }
  return tets;
}

double QuadratureRule::measure() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

QuadratureRule cell_quadrature(const PolyMesh& mesh, std::size_t cell, int degree) {
  const ReferenceRule& ref = reference_tetrahedron_rule(degree);
  const auto tets = tetrahedralize_cell(mesh, cell);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(tets.size() * ref.points.size());
  rule.weights.reserve(tets.size() * ref.points.size());
  for (const auto& t : tets) {
    const Vec3 a = t.v[1] - t.v[0];
    const Vec3 b = t.v[2] - t.v[0];
    const Vec3 c = t.v[3] - t.v[0];
    const double jac = 6.0 * t.signed_volume();
    for (std::size_t q = 0; q < ref.points.size(); ++q) {
      const auto& p = ref.points[q];
      rule.points.push_back(t.v[0] + p[0] * a + p[1] * b + p[2] * c);
      rule.weights.push_back(ref.weights[q] * jac);
    }
  }
  return rule;
}

QuadratureRule face_quadrature(const PolyMesh& mesh, std::size_t face, int degree) {
  const ReferenceRule& ref = reference_triangle_rule(degree);
  QuadratureRule rule;
  rule.degree = degree;
  for (const auto& t : triangulate_face(mesh, face)) {
    const Vec3 a = t.v[1] - t.v[0];
    const Vec3 b = t.v[2] - t.v[0];
    const double jac = 2.0 * t.area();
    for (std::size_t q = 0; q < ref.points.size(); ++q) {
      const auto& p = ref.points[q];
      rule.points.push_back(t.v[0] + p[0] * a + p[1] * b);
      rule.weights.push_back(ref.weights[q] * jac);
    }
  }
  return rule;
}

void attach_level_set(QuadratureRule& rule, const LevelSet& phi) {
  rule.subdomain.resize(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) rule.subdomain[q] = phi(rule.points[q]) <= 0.0 ? -1 : 1;
}

}  // namespace vempb
