#pragma once

#include "vempb/mesh.hpp"

#include <iosfwd>
#include <string>

namespace vempb {

// VPM text format:
//   vpm 1
//   vertices N          followed by N lines "x y z"
//   faces M             followed by M lines "m i1 ... im"   (0-based vertex ids)
//   cells K             followed by K lines "k s1 ... sk"   (s = +-(face id + 1))
// Coordinates are written with 17 significant digits so a round trip is exact.

void write_vpm(std::ostream& out, const PolyMesh& mesh);
void save_mesh(const PolyMesh& mesh, const std::string& path);

/// Throws ParseError with the line number of the offending record.
PolyMesh read_vpm(std::istream& in);
PolyMesh load_mesh(const std::string& path);

}  // namespace vempb
