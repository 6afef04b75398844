#pragma once

#include "vempb/mesh.hpp"

#include <iosfwd>

namespace vempb {

/// Shape-regularity audit: h_e >= gamma h_f >= gamma^2 h_E and star-shapedness.
struct MeshQualityReport {
  double min_edge_to_face = 0.0;  ///< min over faces and their edges of h_e / h_f
  double min_face_to_cell = 0.0;  ///< min over cells and their faces of h_f / h_E
  double gamma_estimate = 0.0;    ///< min of the two ratios
  int star_failed_cells = 0;      ///< cells whose centroid lies outside some face plane
  int star_failed_faces = 0;      ///< faces whose centroid lies outside some edge line
  std::size_t num_cells = 0;
  double mesh_size = 0.0;         ///< (|Omega| / N_E)^(1/3)
  double gamma_min = 0.0;
  bool passed = false;
};

MeshQualityReport check_mesh_assumptions(const PolyMesh& mesh, double gamma_min);

std::ostream& operator<<(std::ostream& out, const MeshQualityReport& report);

}  // namespace vempb
