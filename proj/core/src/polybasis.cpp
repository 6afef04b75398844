#include "vempb/polybasis.hpp"

#include <cmath>

namespace vempb {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

MonomialBasis3::MonomialBasis3(const Vec3& center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree) {
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) exponents_.push_back({a, b, d - a - b});
}

double MonomialBasis3::eval(std::size_t i, const Vec3& x) const {
  return scaled_monomial_eval(*this, exponents_[i], x);
}

Vec3 MonomialBasis3::grad(std::size_t i, const Vec3& x) const {
  return scaled_monomial_grad(*this, exponents_[i], x);
}

Eigen::VectorXd MonomialBasis3::eval_all(const Vec3& x) const {
  Eigen::VectorXd v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = eval(i, x);
  return v;
}

double scaled_monomial_eval(const MonomialBasis3& basis, const std::array<int, 3>& alpha, const Vec3& x) {
  const Vec3 s = (x - basis.center()) / basis.scale();
  return ipow(s.x(), alpha[0]) * ipow(s.y(), alpha[1]) * ipow(s.z(), alpha[2]);
}

Vec3 scaled_monomial_grad(const MonomialBasis3& basis, const std::array<int, 3>& alpha, const Vec3& x) {
  const Vec3 s = (x - basis.center()) / basis.scale();
  Vec3 g = Vec3::Zero();
  for (int d = 0; d < 3; ++d) {
    if (alpha[d] == 0) continue;
    double v = alpha[d] * ipow(s[d], alpha[d] - 1);
    for (int o = 0; o < 3; ++o)
      if (o != d) v *= ipow(s[o], alpha[o]);
    g[d] = v / basis.scale();
  }
  return g;
}

FaceFrame FaceFrame::of(const PolyMesh& mesh, std::size_t face) {
  const Face& f = mesh.face(face);
  FaceFrame frame;
  frame.origin = f.centroid;
  frame.normal = f.normal;
  const Vec3 edge = mesh.vertex(f.vertices[1]) - mesh.vertex(f.vertices[0]);
  frame.e1 = (edge - edge.dot(f.normal) * f.normal).normalized();
  frame.e2 = f.normal.cross(frame.e1);
  return frame;
}

FaceFrame FaceFrame::rotated(double angle) const {
  FaceFrame r = *this;
  r.e1 = std::cos(angle) * e1 + std::sin(angle) * e2;
  r.e2 = normal.cross(r.e1);
  return r;
}

MonomialBasis2::MonomialBasis2(const Vec2& center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree) {
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exponents_.push_back({a, d - a});
}

double MonomialBasis2::eval(std::size_t i, const Vec2& p) const {
  const Vec2 s = (p - center_) / scale_;
  return ipow(s.x(), exponents_[i][0]) * ipow(s.y(), exponents_[i][1]);
}

Vec2 MonomialBasis2::grad(std::size_t i, const Vec2& p) const {
  const Vec2 s = (p - center_) / scale_;
  const auto [a, b] = exponents_[i];
  Vec2 g = Vec2::Zero();
  if (a > 0) g.x() = a * ipow(s.x(), a - 1) * ipow(s.y(), b) / scale_;
  if (b > 0) g.y() = b * ipow(s.x(), a) * ipow(s.y(), b - 1) / scale_;
  return g;
}

}  // namespace vempb
