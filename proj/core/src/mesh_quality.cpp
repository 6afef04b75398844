#include "vempb/mesh_quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace vempb {

MeshQualityReport check_mesh_assumptions(const PolyMesh& mesh, double gamma_min) {
  MeshQualityReport r;
  r.num_cells = mesh.num_cells();
  r.gamma_min = gamma_min;
  r.min_edge_to_face = std::numeric_limits<double>::infinity();
  r.min_face_to_cell = std::numeric_limits<double>::infinity();

  for (const auto& face : mesh.faces()) {
    const std::size_t m = face.vertices.size();
    bool star = true;
    for (std::size_t i = 0; i < m; ++i) {
      const Vec3& a = mesh.vertex(face.vertices[i]);
      const Vec3& b = mesh.vertex(face.vertices[(i + 1) % m]);
      r.min_edge_to_face = std::min(r.min_edge_to_face, (b - a).norm() / face.diameter);
      // The centroid must lie strictly on the inner side of every edge.
      if ((b - a).cross(face.centroid - a).dot(face.normal) <= 0.0) star = false;
    }
    if (!star) ++r.star_failed_faces;
  }

  for (const auto& cell : mesh.cells()) {
    bool star = true;
    for (const auto& cf : cell.faces) {
      const Face& face = mesh.face(cf.face);
      r.min_face_to_cell = std::min(r.min_face_to_cell, face.diameter / cell.diameter);
      if ((cell.centroid - face.centroid).dot(cf.sign * face.normal) >= 0.0) star = false;
    }
    if (!star) ++r.star_failed_cells;
  }

  r.gamma_estimate = std::min(r.min_edge_to_face, r.min_face_to_cell);
  r.mesh_size = r.num_cells > 0 ? std::cbrt(mesh.total_volume() / static_cast<double>(r.num_cells)) : 0.0;
  r.passed = r.gamma_estimate >= gamma_min && r.star_failed_cells == 0 && r.star_failed_faces == 0;
  return r;
}

std::ostream& operator<<(std::ostream& out, const MeshQualityReport& r) {
  out << "cells               " << r.num_cells << '\n'
      << "mesh size h         " << r.mesh_size << '\n'
      << "min h_e/h_f         " << r.min_edge_to_face << '\n'
      << "min h_f/h_E         " << r.min_face_to_cell << '\n'
      << "gamma estimate      " << r.gamma_estimate << " (required >= " << r.gamma_min << ")\n"
      << "star-shape failures " << r.star_failed_cells << " cells, " << r.star_failed_faces << " faces\n"
      << "status              " << (r.passed ? "PASS" : "FAIL") << '\n';
  return out;
}

}  // namespace vempb
