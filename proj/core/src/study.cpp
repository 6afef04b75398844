#include "vempb/study.hpp"

#include "vempb/analysis.hpp"
#include "vempb/level_set.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace vempb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string number(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

double slope(const std::vector<StudyRow>& rows, double StudyRow::*field) {
  if (rows.size() < 2) return kNaN;
  std::vector<double> h, e;
  for (const auto& r : rows) {
    h.push_back(r.h);
    e.push_back(r.*field);
  }
  return fitted_slope(h, e, 3);
}

struct Reference {
  MeshFamily family;
  int n;
  PolyMesh mesh;
  Eigen::VectorXd u;
};

}  // namespace

double ConvergenceReport::l2_slope() const { return slope(rows, &StudyRow::e_l2); }
double ConvergenceReport::h1_slope() const { return slope(rows, &StudyRow::e_h1); }

void ConvergenceReport::write_csv(std::ostream& out, bool with_timings) const {
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
  out << "# complete: " << (complete ? "true" : "false") << '\n';
  if (!complete) out << "# failure: " << failure << '\n';
  out << "level,cells,dofs,interface_cells,h,e_l2,l2_order,e_h1,h1_order,newton_iterations,final_residual,max_abs_u";
  if (with_timings) out << ",wall_time";
  out << '\n';
  for (const auto& r : rows) {
    out << r.level << ',' << r.cells << ',' << r.dofs << ',' << r.interface_cells << ',' << number(r.h) << ','
        << number(r.e_l2) << ',' << number(r.l2_order) << ',' << number(r.e_h1) << ',' << number(r.h1_order) << ','
        << r.solve.iterations << ',' << number(r.solve.residual_history.empty() ? kNaN : r.solve.residual_history.back())
        << ',' << number(r.solve.max_abs_u);
    if (with_timings) out << ',' << number(r.solve.wall_time);
    out << '\n';
  }
}

void ConvergenceReport::write_plotdat(std::ostream& out) const {
  out << "# h e_L2 e_H1 ref2 ref1\n";
  if (rows.empty()) return;
  const StudyRow& first = rows.front();
  for (const auto& r : rows) {
    const double s = r.h / first.h;
    out << number(r.h) << ' ' << number(r.e_l2) << ' ' << number(r.e_h1) << ' ' << number(first.e_l2 * s * s) << ' '
        << number(first.e_h1 * s) << '\n';
  }
}

void ConvergenceReport::print_table(std::ostream& out) const {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setw(6) << "level" << std::setw(9) << "cells" << std::setw(9) << "Dof" << std::setw(11) << "h"
      << std::setw(13) << "e_L2" << std::setw(9) << "L2-Ord" << std::setw(13) << "e_H1" << std::setw(9) << "H1-Ord"
      << std::setw(8) << "Newton" << '\n';
  for (const auto& r : rows) {
    out << std::setw(6) << r.level << std::setw(9) << r.cells << std::setw(9) << r.dofs << std::setw(11)
        << std::setprecision(4) << std::fixed << r.h << std::setw(13) << std::scientific << std::setprecision(3)
        << r.e_l2 << std::setw(9) << std::fixed << std::setprecision(2);
    if (std::isnan(r.l2_order)) out << "-"; else out << r.l2_order;
    out << std::setw(13) << std::scientific << std::setprecision(3) << r.e_h1 << std::setw(9) << std::fixed
        << std::setprecision(2);
    if (std::isnan(r.h1_order)) out << "-"; else out << r.h1_order;
    out << std::setw(8) << r.solve.iterations << '\n';
  }
  if (rows.size() >= 2) {
    out << std::fixed << std::setprecision(3) << "fitted slopes (last " << std::min<std::size_t>(3, rows.size())
        << " levels): L2 " << l2_slope() << ", H1 " << h1_slope() << '\n';
  }
  if (!complete) out << "study incomplete: " << failure << '\n';
  out.flags(flags);
  out.precision(precision);
}

ConvergenceReport run_convergence_study(const StudyConfig& config,
                                        const std::function<void(const StudyRow&)>& on_level) {
  if (config.levels.empty()) throw ConfigError("a study needs at least one level");
  config.load.validate();
  config.newton.validate();
  config.physics.validate();

  ConvergenceReport report;
  report.metadata = config.metadata;

  std::optional<Reference> reference;
  try {
    if (!config.load.solution) {
      if (!config.reference) throw ConfigError("a study without a manufactured solution needs a reference mesh");
      const MeshSpec& spec = *config.reference;
      if (spec.family != MeshFamily::cubic && spec.family != MeshFamily::tet) {
        throw ConfigError("the reference mesh must be cubic or tet");
      }
      Discretization disc(make_mesh(spec), config.physics, config.discretization);
      auto solved = newton_solve(disc, config.load, config.newton);
      reference = Reference{spec.family, spec.n, disc.mesh(), std::move(solved.u)};
    }

    for (std::size_t l = 0; l < config.levels.size(); ++l) {
      const MeshSpec& spec = config.levels[l];
      Discretization disc(make_mesh(spec), config.physics, config.discretization);
      StudyRow row;
      row.level = static_cast<int>(l);
      row.cells = disc.mesh().num_cells();
      row.dofs = disc.num_dofs();
      row.interface_cells = classify_interface(disc.mesh(), config.physics.levelset).interface_cells.size();
      row.h = mesh_size(disc.mesh());
      if (!report.rows.empty() && !(row.h < report.rows.back().h)) {
        throw ConfigError("study levels must have strictly decreasing mesh size");
      }
      auto solved = newton_solve(disc, config.load, config.newton);
      row.solve = solved.report;

      ErrorNorms e;
      if (config.load.solution) {
        e = compute_errors(disc.mesh(), solved.u, *config.load.solution, config.discretization.quadrature_degree);
      } else {
        e = compare_to_reference({spec.family, spec.n, disc.mesh(), solved.u},
                                 {reference->family, reference->n, reference->mesh, reference->u},
                                 config.discretization.quadrature_degree);
      }
      row.e_l2 = e.l2;
      row.e_h1 = e.h1;
      row.l2_order = kNaN;
      row.h1_order = kNaN;
      if (!report.rows.empty()) {
        const StudyRow& prev = report.rows.back();
        row.l2_order = convergence_order(prev.e_l2, row.e_l2, prev.h, row.h);
        row.h1_order = convergence_order(prev.e_h1, row.e_h1, prev.h, row.h);
      }
      report.rows.push_back(row);
      if (on_level) on_level(report.rows.back());
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    report.complete = false;
    report.failure = e.what();
  }
  return report;
}

}  // namespace vempb
