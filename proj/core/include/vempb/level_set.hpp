#pragma once

#include "vempb/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vempb {

/// Signed function whose zero set is the dielectric interface.
/// Negative values mark the molecular region, positive values the solvent.
class LevelSet {
 public:
  using Function = std::function<double(const Vec3&)>;

  LevelSet(Function phi, std::string description);

  /// phi(x) = max(x1, x2, x3) - side: negative exactly inside the open box (., side)^3,
  /// which within the unit cube is the molecular box [0, side]^3.
  static LevelSet corner_box(double side);

  double operator()(const Vec3& x) const { return phi_(x); }
  const std::string& description() const { return description_; }

 private:
  Function phi_;
  std::string description_;
};

/// Partition of the cells into interface cells and the rest.
struct InterfacePartition {
  std::vector<bool> is_interface;
  std::vector<int> interface_cells;
  std::vector<int> regular_cells;
};

/// A cell is an interface cell when the level set takes strictly negative and strictly
/// positive values among its vertices, face centroids and cell centroid. Values within
/// kInterfaceTolerance of zero count as on the interface, so that centroids of faces lying
/// on the interface (rounded to either side) do not flag fitted cells.
inline constexpr double kInterfaceTolerance = 1e-12;

InterfacePartition classify_interface(const PolyMesh& mesh, const LevelSet& phi);

}  // namespace vempb
