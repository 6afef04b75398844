#include "vempb/level_set.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace vempb {

LevelSet::LevelSet(Function phi, std::string description)
    : phi_(std::move(phi)), description_(std::move(description)) {}

LevelSet LevelSet::corner_box(double side) {
  std::ostringstream name;
  name.precision(17);
  name << "corner_box(" << side << ")";
  return LevelSet([side](const Vec3& x) { return x.maxCoeff() - side; }, name.str());
}

InterfacePartition classify_interface(const PolyMesh& mesh, const LevelSet& phi) {
  InterfacePartition part;
  part.is_interface.assign(mesh.num_cells(), false);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    bool negative = false;
    bool positive = false;
    auto sample = [&](const Vec3& x) {
      const double v = phi(x);
      negative = negative || v < -kInterfaceTolerance;
      positive = positive || v > kInterfaceTolerance;
    };
    for (int v : cell.vertices) sample(mesh.vertex(v));
    for (const auto& cf : cell.faces) sample(mesh.face(cf.face).centroid);
    sample(cell.centroid);

    part.is_interface[c] = negative && positive;
    (part.is_interface[c] ? part.interface_cells : part.regular_cells).push_back(static_cast<int>(c));
  }
  return part;
}

}  // namespace vempb
