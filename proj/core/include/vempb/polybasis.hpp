#pragma once

#include "vempb/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace vempb {

using Vec2 = Eigen::Vector2d;

/// Scaled monomials m_a(x) = ((x - center) / scale)^a for |a| <= degree on a cell.
/// Ordered by total degree, then lexicographically descending in the leading exponent:
/// 1, x, y, z, x^2, xy, xz, y^2, ...
class MonomialBasis3 {
 public:
  MonomialBasis3() : MonomialBasis3(Vec3::Zero(), 1.0, 1) {}
  MonomialBasis3(const Vec3& center, double scale, int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return exponents_.size(); }
  const Vec3& center() const { return center_; }
  double scale() const { return scale_; }
  const std::array<int, 3>& exponent(std::size_t i) const { return exponents_[i]; }

  double eval(std::size_t i, const Vec3& x) const;
  Vec3 grad(std::size_t i, const Vec3& x) const;
  Eigen::VectorXd eval_all(const Vec3& x) const;

 private:
  Vec3 center_;
  double scale_;
  int degree_;
  std::vector<std::array<int, 3>> exponents_;
};

/// Orthonormal in-plane frame of a face: x = origin + xi*e1 + eta*e2.
struct FaceFrame {
  Vec3 origin;
  Vec3 e1;
  Vec3 e2;
  Vec3 normal;

  /// Frame anchored at the face centroid with e1 along the first edge.
  static FaceFrame of(const PolyMesh& mesh, std::size_t face);
  /// Same plane with the in-plane axes rotated by `angle`.
  FaceFrame rotated(double angle) const;

  Vec2 to_local(const Vec3& x) const { return {(x - origin).dot(e1), (x - origin).dot(e2)}; }
  Vec3 to_global(const Vec2& p) const { return origin + p.x() * e1 + p.y() * e2; }
};

/// Scaled monomials in a face frame, same ordering convention as MonomialBasis3.
class MonomialBasis2 {
 public:
  MonomialBasis2() : MonomialBasis2(Vec2::Zero(), 1.0, 1) {}
  MonomialBasis2(const Vec2& center, double scale, int degree);

  std::size_t size() const { return exponents_.size(); }
  int degree() const { return degree_; }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }
  const std::array<int, 2>& exponent(std::size_t i) const { return exponents_[i]; }

  double eval(std::size_t i, const Vec2& p) const;
  Vec2 grad(std::size_t i, const Vec2& p) const;

 private:
  Vec2 center_;
  double scale_;
  int degree_;
  std::vector<std::array<int, 2>> exponents_;
};

/// Number of monomials of degree <= k in `dim` variables.
constexpr std::size_t monomial_count(int dim, int k) {
  return dim == 2 ? static_cast<std::size_t>((k + 1) * (k + 2) / 2)
                  : static_cast<std::size_t>((k + 1) * (k + 2) * (k + 3) / 6);
}

double scaled_monomial_eval(const MonomialBasis3& basis, const std::array<int, 3>& alpha, const Vec3& x);
Vec3 scaled_monomial_grad(const MonomialBasis3& basis, const std::array<int, 3>& alpha, const Vec3& x);

}  // namespace vempb
