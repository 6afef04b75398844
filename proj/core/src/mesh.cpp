#include "vempb/mesh.hpp"

#include "vempb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace vempb {

PolygonGeometry polygon_geometry(std::span<const Vec3> loop) {
  const std::size_t m = loop.size();
  Vec3 mean = Vec3::Zero();
  for (const auto& p : loop) mean += p;
  mean /= static_cast<double>(m);

  // Newell normal, robust for slightly non-planar loops.
  Vec3 newell = Vec3::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    newell += (loop[i] - mean).cross(loop[(i + 1) % m] - mean);
  }
  const double twice_area = newell.norm();
  PolygonGeometry g;
  g.area = 0.5 * twice_area;
  g.normal = twice_area > 0.0 ? Vec3(newell / twice_area) : Vec3::Zero();

  // Area centroid from the fan around the vertex mean.
  Vec3 weighted = Vec3::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % m];
    const double tri = 0.5 * (a - mean).cross(b - mean).dot(g.normal);
    weighted += tri * (mean + a + b) / 3.0;
    total += tri;
  }
  g.centroid = total != 0.0 ? Vec3(weighted / total) : mean;
  g.diameter = point_set_diameter(loop);
  return g;
}

double planarity_defect(std::span<const Vec3> loop, const Vec3& normal, const Vec3& centroid) {
  double worst = 0.0;
  for (const auto& p : loop) worst = std::max(worst, std::abs((p - centroid).dot(normal)));
  return worst;
}

double point_set_diameter(std::span<const Vec3> points) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      d2 = std::max(d2, (points[i] - points[j]).squaredNorm());
    }
  }
  return std::sqrt(d2);
}

PolyMesh::PolyMesh(std::vector<Vec3> vertices, std::vector<std::vector<int>> face_loops,
                   std::vector<std::vector<CellFace>> cell_faces, MeshTolerances tol)
    : vertices_(std::move(vertices)) {
  faces_.resize(face_loops.size());
  for (std::size_t f = 0; f < face_loops.size(); ++f) faces_[f].vertices = std::move(face_loops[f]);
  cells_.resize(cell_faces.size());
  for (std::size_t c = 0; c < cell_faces.size(); ++c) cells_[c].faces = std::move(cell_faces[c]);
  validate_topology();
  compute_geometry(tol);
}

void PolyMesh::validate_topology() {
  const int nv = static_cast<int>(vertices_.size());
  const int nf = static_cast<int>(faces_.size());

  for (int f = 0; f < nf; ++f) {
    const auto& loop = faces_[f].vertices;
    if (loop.size() < 3) throw MeshError("face " + std::to_string(f) + " has fewer than 3 vertices");
    for (int v : loop) {
      if (v < 0 || v >= nv) {
        throw MeshError("face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                        " out of range");
      }
    }
    auto sorted = loop;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw MeshError("face " + std::to_string(f) + " repeats a vertex");
    }
  }

  face_cell_count_.assign(nf, 0);
  std::vector<int> first_sign(nf, 0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cell = cells_[c];
    if (cell.faces.size() < 4) throw MeshError("cell " + std::to_string(c) + " has fewer than 4 faces", static_cast<int>(c));
    for (const auto& cf : cell.faces) {
      if (cf.face < 0 || cf.face >= nf) {
        throw MeshError("cell " + std::to_string(c) + " references face " + std::to_string(cf.face) +
                        " out of range",
                        static_cast<int>(c));
      }
      if (cf.sign != 1 && cf.sign != -1) {
        throw MeshError("cell " + std::to_string(c) + " has invalid orientation sign", static_cast<int>(c));
      }
      int& count = face_cell_count_[cf.face];
      if (count == 0) {
        first_sign[cf.face] = cf.sign;
      } else if (count == 1 && first_sign[cf.face] == cf.sign) {
        throw MeshError("face " + std::to_string(cf.face) +
                        " is shared by two cells with the same orientation sign");
      } else if (count >= 2) {
        throw MeshError("face " + std::to_string(cf.face) + " is referenced by more than two cells");
      }
      ++count;
    }

    // Watertightness: every oriented edge must be matched by its reverse exactly once.
    std::vector<std::pair<int, int>> edges;
    for (const auto& cf : cell.faces) {
      const auto& loop = faces_[cf.face].vertices;
      const std::size_t m = loop.size();
      for (std::size_t i = 0; i < m; ++i) {
        int a = loop[i];
        int b = loop[(i + 1) % m];
        if (cf.sign < 0) std::swap(a, b);
        edges.emplace_back(a, b);
      }
    }
    std::sort(edges.begin(), edges.end());
    const bool duplicated = std::adjacent_find(edges.begin(), edges.end()) != edges.end();
    bool matched = !duplicated;
    for (const auto& [a, b] : edges) {
      if (!matched) break;
      matched = std::binary_search(edges.begin(), edges.end(), std::make_pair(b, a));
    }
    if (!matched) throw MeshError("non-watertight cell " + std::to_string(c), static_cast<int>(c));

    cell.vertices.clear();
    for (const auto& cf : cell.faces) {
      for (int v : faces_[cf.face].vertices) {
        if (std::find(cell.vertices.begin(), cell.vertices.end(), v) == cell.vertices.end()) {
          cell.vertices.push_back(v);
        }
      }
    }
  }
  for (int f = 0; f < nf; ++f) {
    if (face_cell_count_[f] == 0) throw MeshError("face " + std::to_string(f) + " is not used by any cell");
  }

  boundary_vertices_.assign(vertices_.size(), false);
  for (int f = 0; f < nf; ++f) {
    if (face_cell_count_[f] == 1) {
      for (int v : faces_[f].vertices) boundary_vertices_[v] = true;
    }
  }
}

void PolyMesh::compute_geometry(const MeshTolerances& tol) {
  std::vector<Vec3> loop;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    auto& face = faces_[f];
    loop.clear();
    for (int v : face.vertices) loop.push_back(vertices_[v]);
    const auto g = polygon_geometry(loop);
    if (!(g.area > tol.min_face_area)) throw MeshError("degenerate face " + std::to_string(f));
    if (planarity_defect(loop, g.normal, g.centroid) > tol.planarity) {
      throw MeshError("non-planar face " + std::to_string(f));
    }
    face.normal = g.normal;
    face.centroid = g.centroid;
    face.area = g.area;
    face.diameter = g.diameter;
  }

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cell = cells_[c];
    Vec3 ref = Vec3::Zero();
    for (int v : cell.vertices) ref += vertices_[v];
    ref /= static_cast<double>(cell.vertices.size());

    // |E| = 1/3 sum_f s (x_f - r).n_f |f|;  int_E (x - r)_i = 1/2 sum_f s n_{f,i} int_f (x - r)_i^2.
    double volume = 0.0;
    Vec3 first_moment = Vec3::Zero();
    for (const auto& cf : cell.faces) {
      const Face& face = faces_[cf.face];
      const Vec3 n = static_cast<double>(cf.sign) * face.normal;
      volume += (face.centroid - ref).dot(n) * face.area / 3.0;

      // Quadratic face moments: fan from the face centroid, edge-midpoint rule per triangle.
      const std::size_t m = face.vertices.size();
      Vec3 second = Vec3::Zero();
      for (std::size_t i = 0; i < m; ++i) {
        const Vec3 a = face.centroid - ref;
        const Vec3 b = vertices_[face.vertices[i]] - ref;
        const Vec3 d = vertices_[face.vertices[(i + 1) % m]] - ref;
        const double tri = 0.5 * (b - a).cross(d - a).dot(face.normal);
        const Vec3 m1 = 0.5 * (a + b);
        const Vec3 m2 = 0.5 * (b + d);
        const Vec3 m3 = 0.5 * (d + a);
        second += tri / 3.0 * (m1.cwiseProduct(m1) + m2.cwiseProduct(m2) + m3.cwiseProduct(m3));
      }
      first_moment += 0.5 * n.cwiseProduct(second);
    }
    if (!(volume > tol.min_cell_volume)) {
      throw MeshError("cell " + std::to_string(c) + " has non-positive volume (" + std::to_string(volume) +
                      "); check face orientation signs",
                      static_cast<int>(c));
    }
    cell.volume = volume;
    cell.centroid = ref + first_moment / volume;

    std::vector<Vec3> pts;
    pts.reserve(cell.vertices.size());
    for (int v : cell.vertices) pts.push_back(vertices_[v]);
    cell.diameter = point_set_diameter(pts);
  }
}

double PolyMesh::total_volume() const {
  double sum = 0.0;
  for (const auto& c : cells_) sum += c.volume;
  return sum;
}

double PolyMesh::max_planarity_defect() const {
  double worst = 0.0;
  std::vector<Vec3> loop;
  for (const auto& face : faces_) {
    loop.clear();
    for (int v : face.vertices) loop.push_back(vertices_[v]);
    worst = std::max(worst, planarity_defect(loop, face.normal, face.centroid));
  }
  return worst;
}

double PolyMesh::closure_defect(std::size_t cell) const {
  Vec3 sum = Vec3::Zero();
  for (const auto& cf : cells_[cell].faces) {
    sum += static_cast<double>(cf.sign) * faces_[cf.face].area * faces_[cf.face].normal;
  }
  return sum.norm();
}

}  // namespace vempb
