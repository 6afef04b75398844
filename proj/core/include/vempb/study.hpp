#pragma once

#include "vempb/discretization.hpp"
#include "vempb/forms.hpp"
#include "vempb/mesh_generators.hpp"
#include "vempb/newton.hpp"
#include "vempb/physics.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vempb {

struct StudyConfig {
  std::vector<MeshSpec> levels;  ///< coarse to fine
  PhysicsConfig physics;
  LoadSpec load = LoadSpec::manufactured(ManufacturedSolution::sine());
  NewtonConfig newton;
  DiscretizationOptions discretization;
  /// Structured fine mesh whose solution stands in for the exact one. Required when the
  /// load has no manufactured solution; otherwise ignored.
  std::optional<MeshSpec> reference;
  /// Free-form key/value lines copied into the report header.
  std::vector<std::pair<std::string, std::string>> metadata;
};

struct StudyRow {
  int level = 0;
  std::size_t cells = 0;
  std::size_t dofs = 0;
  std::size_t interface_cells = 0;
  double h = 0.0;
  double e_l2 = 0.0;
  double l2_order = 0.0;  ///< NaN on the first row
  double e_h1 = 0.0;
  double h1_order = 0.0;  ///< NaN on the first row
  SolveReport solve;
};

struct ConvergenceReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<StudyRow> rows;
  bool complete = true;
  std::string failure;  ///< set when a level failed; rows hold the finished levels

  /// Least-squares slopes over the last three levels; NaN with fewer than two rows.
  double l2_slope() const;
  double h1_slope() const;

  /// '#'-prefixed metadata lines followed by one CSV row per level. Wall times are left
  /// out unless requested so that reports are reproducible byte for byte.
  void write_csv(std::ostream& out, bool with_timings = false) const;
  /// Whitespace-separated columns h e_L2 e_H1 ref2 ref1; the reference lines have slopes
  /// 2 and 1 and pass through the coarsest point.
  void write_plotdat(std::ostream& out) const;
  /// Human-readable order table.
  void print_table(std::ostream& out) const;
};

/// Solves every level, measures errors and pairwise orders. A failing level stops the study
/// and returns the rows finished so far with `complete == false`.
ConvergenceReport run_convergence_study(const StudyConfig& config,
                                        const std::function<void(const StudyRow&)>& on_level = {});

}  // namespace vempb
