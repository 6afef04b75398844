#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <span>
#include <vector>

namespace vempb {

using Vec3 = Eigen::Vector3d;

/// Planar polygonal face. Vertices are listed counter-clockwise with respect to `normal`.
struct Face {
  std::vector<int> vertices;
  Vec3 normal = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
  double area = 0.0;
  double diameter = 0.0;
};

/// Reference from a cell to one of its faces. `sign` is +1 when the stored face
/// normal points out of the cell and -1 otherwise.
struct CellFace {
  int face = 0;
  int sign = 1;
};

struct Cell {
  std::vector<CellFace> faces;
  /// Distinct vertices of the cell in order of first appearance along `faces`.
  /// This is the local DoF ordering used by the projectors and assembly.
  std::vector<int> vertices;
  Vec3 centroid = Vec3::Zero();
  double diameter = 0.0;
  double volume = 0.0;
};

/// Geometric tolerances enforced on construction.
struct MeshTolerances {
  double planarity = 1e-10;
  double min_face_area = 1e-14;
  double min_cell_volume = 1e-14;
};

/// Immutable polyhedral mesh. The constructor validates connectivity
/// (index ranges, face sharing, watertight cells) and computes all geometry.
class PolyMesh {
 public:
  PolyMesh() = default;
  PolyMesh(std::vector<Vec3> vertices, std::vector<std::vector<int>> face_loops,
           std::vector<std::vector<CellFace>> cell_faces, MeshTolerances tol = {});

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_faces() const { return faces_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Vec3& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(std::size_t i) const { return faces_[i]; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }

  /// True for vertices lying on a face referenced by a single cell.
  const std::vector<bool>& boundary_vertices() const { return boundary_vertices_; }
  /// Number of cells referencing each face (1 = boundary, 2 = interior).
  const std::vector<int>& face_cell_count() const { return face_cell_count_; }

  /// Sum of cell volumes.
  double total_volume() const;

  /// max_f of the largest vertex distance to the best-fit plane of f.
  double max_planarity_defect() const;

  /// Norm of sum_f sign*|f|*n_f for one cell; zero for a closed surface.
  double closure_defect(std::size_t cell) const;

 private:
  void validate_topology();
  void compute_geometry(const MeshTolerances& tol);

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Cell> cells_;
  std::vector<bool> boundary_vertices_;
  std::vector<int> face_cell_count_;
};

/// Area, unit normal (Newell), area centroid and diameter of a planar polygon.
struct PolygonGeometry {
  Vec3 normal;
  Vec3 centroid;
  double area;
  double diameter;
};
PolygonGeometry polygon_geometry(std::span<const Vec3> loop);

/// Maximum distance of the loop's points to the plane through `centroid` with `normal`.
double planarity_defect(std::span<const Vec3> loop, const Vec3& normal, const Vec3& centroid);

/// Largest pairwise distance in a point set.
double point_set_diameter(std::span<const Vec3> points);

}  // namespace vempb
