#include "vempb/error.hpp"
#include "vempb/mesh_generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace vempb {

namespace {

constexpr double kPlaneEps = 1e-13;

// Planar polygon of a convex cell. Non-negative tags name the neighbouring seed whose
// bisector produced the polygon; negative tags mark the six sides of the unit cube.
struct Polygon {
  std::vector<Vec3> points;
  int tag;
};

using ConvexCell = std::vector<Polygon>;

ConvexCell unit_cube_cell() {
  const Vec3 c[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                     {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  return {
      {{c[0], c[3], c[2], c[1]}, -1},  // z = 0
      {{c[4], c[5], c[6], c[7]}, -2},  // z = 1
      {{c[0], c[1], c[5], c[4]}, -3},  // y = 0
      {{c[3], c[7], c[6], c[2]}, -4},  // y = 1
      {{c[0], c[4], c[7], c[3]}, -5},  // x = 0
      {{c[1], c[2], c[6], c[5]}, -6},  // x = 1
  };
}

// Edge/plane intersection evaluated with endpoints in a canonical order so that both
// polygons sharing the edge produce bit-identical points.
Vec3 intersect(const Vec3& p, double dp, const Vec3& q, double dq) {
  const bool swap = std::lexicographical_compare(q.data(), q.data() + 3, p.data(), p.data() + 3);
  const Vec3& a = swap ? q : p;
  const Vec3& b = swap ? p : q;
  const double da = swap ? dq : dp;
  const double db = swap ? dp : dq;
  const double t = da / (da - db);
  return a + t * (b - a);
}

void append_unique(std::vector<Vec3>& pts, const Vec3& x, double tol) {
  for (const auto& p : pts)
    if ((p - x).squaredNorm() <= tol * tol) return;
  pts.push_back(x);
}

// Keeps the part of the cell with normal.x <= offset. Returns false if nothing was cut.
bool clip(ConvexCell& cell, const Vec3& normal, double offset, int tag) {
  bool any_outside = false;
  for (const auto& poly : cell) {
    for (const auto& p : poly.points) {
      if (normal.dot(p) - offset > kPlaneEps) {
        any_outside = true;
        break;
      }
    }
    if (any_outside) break;
  }
  if (!any_outside) return false;

  std::vector<Vec3> cap;
  ConvexCell result;
  result.reserve(cell.size() + 1);
  std::vector<double> d;
  for (auto& poly : cell) {
    const std::size_t m = poly.points.size();
    d.resize(m);
    bool inside_any = false;
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = normal.dot(poly.points[i]) - offset;
      inside_any = inside_any || d[i] < -kPlaneEps;
    }
    if (!inside_any) {
      // Entirely outside or lying on the plane: its on-plane vertices still bound the cap.
      for (std::size_t i = 0; i < m; ++i)
        if (std::abs(d[i]) <= kPlaneEps) append_unique(cap, poly.points[i], 1e-14);
      continue;
    }
    Polygon clipped{{}, poly.tag};
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      const Vec3& p = poly.points[i];
      const Vec3& q = poly.points[j];
      if (d[i] <= kPlaneEps) {
        clipped.points.push_back(p);
        if (d[i] >= -kPlaneEps) append_unique(cap, p, 1e-14);
      }
      if ((d[i] < -kPlaneEps && d[j] > kPlaneEps) || (d[i] > kPlaneEps && d[j] < -kPlaneEps)) {
        const Vec3 x = intersect(p, d[i], q, d[j]);
        clipped.points.push_back(x);
        append_unique(cap, x, 1e-14);
      }
    }
    if (clipped.points.size() >= 3) result.push_back(std::move(clipped));
  }

  if (cap.size() >= 3) {
    Vec3 center = Vec3::Zero();
    for (const auto& p : cap) center += p;
    center /= static_cast<double>(cap.size());
    const Vec3 u = (std::abs(normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(normal).normalized();
    const Vec3 v = normal.cross(u);
    std::vector<std::pair<double, Vec3>> by_angle;
    by_angle.reserve(cap.size());
    for (const auto& p : cap) by_angle.emplace_back(std::atan2((p - center).dot(v), (p - center).dot(u)), p);
    std::sort(by_angle.begin(), by_angle.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Polygon face{{}, tag};
    for (const auto& [angle, p] : by_angle) face.points.push_back(p);
    result.push_back(std::move(face));
  }
  cell = std::move(result);
  return true;
}

double cell_radius(const ConvexCell& cell, const Vec3& seed) {
  double r2 = 0.0;
  for (const auto& poly : cell)
    for (const auto& p : poly.points) r2 = std::max(r2, (p - seed).squaredNorm());
  return std::sqrt(r2);
}

double convex_volume(const ConvexCell& cell) {
  Vec3 ref = Vec3::Zero();
  std::size_t count = 0;
  for (const auto& poly : cell)
    for (const auto& p : poly.points) {
      ref += p;
      ++count;
    }
  if (count == 0) return 0.0;
  ref /= static_cast<double>(count);
  double vol = 0.0;
  for (const auto& poly : cell) {
    for (std::size_t i = 1; i + 1 < poly.points.size(); ++i) {
      vol += (poly.points[0] - ref).dot((poly.points[i] - ref).cross(poly.points[i + 1] - ref)) / 6.0;
    }
  }
  return vol;
}

// Merges points closer than `tol` using a hash grid with cell size `tol`.
class VertexMerger {
 public:
  explicit VertexMerger(double tol) : tol_(tol) {}

  int insert(const Vec3& x) {
    const Key k = key(x);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          auto it = buckets_.find(Key{k[0] + dx, k[1] + dy, k[2] + dz});
          if (it == buckets_.end()) continue;
          for (int id : it->second)
            if ((points_[id] - x).norm() <= tol_) return id;
        }
    const int id = static_cast<int>(points_.size());
    points_.push_back(x);
    buckets_[k].push_back(id);
    return id;
  }

  std::vector<Vec3> take() { return std::move(points_); }

 private:
  using Key = std::array<long long, 3>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
      return h;
    }
  };
  Key key(const Vec3& x) const {
    return {static_cast<long long>(std::floor(x[0] / tol_)), static_cast<long long>(std::floor(x[1] / tol_)),
            static_cast<long long>(std::floor(x[2] / tol_))};
  }

  double tol_;
  std::vector<Vec3> points_;
  std::unordered_map<Key, std::vector<int>, KeyHash> buckets_;
};

}  // namespace

PolyMesh generate_voronoi_mesh(std::span<const Vec3> seeds, double merge_tol) {
  const int n = static_cast<int>(seeds.size());
  if (n < 1) throw MeshError("voronoi mesh requires at least one seed");
  for (int i = 0; i < n; ++i) {
    if ((seeds[i].array() <= 0.0).any() || (seeds[i].array() >= 1.0).any()) {
      throw MeshError("voronoi seed " + std::to_string(i) + " is not inside the open unit cube");
    }
  }

  std::vector<ConvexCell> cells(n);
  std::vector<std::pair<double, int>> order;
  order.reserve(n);
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.emplace_back((seeds[j] - seeds[i]).squaredNorm(), j);
    std::sort(order.begin(), order.end());

    ConvexCell cell = unit_cube_cell();
    double radius = cell_radius(cell, seeds[i]);
    for (const auto& [dist2, j] : order) {
      const double dist = std::sqrt(dist2);
      // Seeds farther than twice the current cell radius cannot cut the cell.
      if (dist > 2.0 * radius) break;
      if (dist == 0.0) throw MeshError("voronoi seeds " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      const Vec3 normal = (seeds[j] - seeds[i]) / dist;
      const double offset = normal.dot(0.5 * (seeds[i] + seeds[j]));
      if (clip(cell, normal, offset, j)) radius = cell_radius(cell, seeds[i]);
    }
    const double vol = convex_volume(cell);
    if (!(vol >= 1e-12)) {
      throw MeshError("voronoi cell of seed " + std::to_string(i) + " degenerates (volume " + std::to_string(vol) + ")");
    }
    cells[i] = std::move(cell);
  }

  VertexMerger merger(merge_tol);
  std::vector<std::vector<int>> faces;
  std::vector<std::vector<CellFace>> cell_faces(n);
  std::map<std::pair<int, int>, int> shared;
  for (int i = 0; i < n; ++i) {
    for (const auto& poly : cells[i]) {
      std::vector<int> loop;
      for (const auto& p : poly.points) {
        const int id = merger.insert(p);
        if (loop.empty() || loop.back() != id) loop.push_back(id);
      }
      while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
      if (loop.size() < 3) continue;

      if (poly.tag < 0 || i < poly.tag) {
        const int f = static_cast<int>(faces.size());
        faces.push_back(std::move(loop));
        cell_faces[i].push_back({f, 1});
        if (poly.tag >= 0) shared.emplace(std::make_pair(i, poly.tag), f);
      } else {
        auto it = shared.find({poly.tag, i});
        if (it == shared.end()) {
          throw MeshError("voronoi cells " + std::to_string(poly.tag) + " and " + std::to_string(i) +
                          " disagree on their common face");
        }
        cell_faces[i].push_back({it->second, -1});
      }
    }
  }
  return PolyMesh(merger.take(), std::move(faces), std::move(cell_faces));
}

}  // namespace vempb
