#include "vempb_cli/app.hpp"

#include "vempb_cli/config.hpp"

#include <vempb/analysis.hpp>
#include <vempb/level_set.hpp>
#include <vempb/mesh_generators.hpp>
#include <vempb/mesh_io.hpp>
#include <vempb/mesh_quality.hpp>
#include <vempb/parallel.hpp>
#include <vempb/study.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>

namespace vempb::cli {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const DivergedStateError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const vempb::Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

std::string describe(const MeshSpec& m) {
  switch (m.family) {
    case MeshFamily::cubic:
    case MeshFamily::tet: return to_string(m.family) + " n=" + std::to_string(m.n);
    case MeshFamily::voronoi:
      return "voronoi n_seeds=" + std::to_string(m.n_seeds) + " rng_seed=" + std::to_string(m.rng_seed);
    case MeshFamily::file: return "file " + m.path;
  }
  return "?";
}

int cmd_mesh_gen(const MeshSpec& spec, const std::string& path, std::ostream& out) {
  if (path.empty()) throw ConfigError("mesh gen needs an output file (-o)");
  const PolyMesh mesh = make_mesh(spec);
  save_mesh(mesh, path);
  out << "wrote " << path << ": " << mesh.num_vertices() << " vertices, " << mesh.num_faces() << " faces, "
      << mesh.num_cells() << " cells\n";
  return kOk;
}

int cmd_mesh_check(const std::string& path, double gamma_min, double side, std::ostream& out) {
  const PolyMesh mesh = load_mesh(path);
  const auto quality = check_mesh_assumptions(mesh, gamma_min);
  const auto partition = classify_interface(mesh, LevelSet::corner_box(side));
  out << "vertices " << mesh.num_vertices() << ", faces " << mesh.num_faces() << ", cells " << mesh.num_cells()
      << '\n'
      << std::setprecision(17) << "total volume " << mesh.total_volume() << '\n'
      << quality << "interface cells " << partition.interface_cells.size() << '\n';
  return kOk;
}

int cmd_solve(const std::string& config_path, std::string out_path, std::ostream& out, std::ostream& err) {
  const RunConfig config = load_run_config(config_path);
  if (out_path.empty()) out_path = config.output.solution;
  const LoadSpec load = config.load.to_spec();

  Discretization disc(make_mesh(config.mesh), config.physics, config.discretization);
  const auto interface_cells = classify_interface(disc.mesh(), config.physics.levelset).interface_cells.size();
  out << "mesh: " << describe(config.mesh) << " (" << disc.mesh().num_cells() << " cells, " << disc.num_dofs()
      << " DoFs, " << interface_cells << " interface cells, h = " << mesh_size(disc.mesh()) << ")\n";

  NewtonResult result;
  try {
    result = newton_solve(disc, load, config.solver);
  } catch (const NewtonError& e) {
    const std::string failed = out_path + ".failed";
    save_solution_csv(failed, disc.mesh(), e.partial().u);
    err << "error: " << e.what() << "\npartial state written to " << failed << '\n';
    return kSolverFailure;
  }
  save_solution_csv(out_path, disc.mesh(), result.u);

  const SolveReport& r = result.report;
  out << std::setprecision(6) << "newton: converged in " << r.iterations << " iterations, residual "
      << r.residual_history.front() << " -> " << r.residual_history.back() << ", " << r.damping_events
      << " damping events\n";
  out << "cg iterations:";
  for (auto n : r.cg_iterations) out << ' ' << n;
  out << "\nmax |u_h|: " << r.max_abs_u << '\n';
  if (load.solution) {
    const ErrorNorms e = compute_errors(disc.mesh(), result.u, *load.solution, config.discretization.quadrature_degree);
    out << std::setprecision(17) << "e_L2: " << e.l2 << "\ne_H1: " << e.h1 << '\n';
  }
  out << std::setprecision(3) << "wall time: " << r.wall_time << " s\n";
  out << "wrote " << out_path << '\n';
  return kOk;
}

int cmd_study(const std::string& config_path, std::string out_path, bool timings, std::ostream& out,
              std::ostream& err) {
  const RunConfig config = load_run_config(config_path);
  if (config.study_levels.size() < 2) throw ConfigError("need >= 2 levels in study.levels");
  if (out_path.empty()) out_path = config.output.report;

  StudyConfig study;
  study.levels = config.study_levels;
  study.physics = config.physics;
  study.load = config.load.to_spec();
  study.newton = config.solver;
  study.discretization = config.discretization;
  study.reference = config.study_reference;
  study.metadata = {{"config", to_json(config).dump()}};

  const ConvergenceReport report = run_convergence_study(study, [&](const StudyRow& row) {
    out << "level " << row.level << ": " << row.cells << " cells, " << row.dofs << " DoFs, Newton "
        << row.solve.iterations << '\n';
  });
  report.print_table(out);

  const std::string report_path = report.complete ? out_path : out_path + ".failed";
  {
    auto csv = open_output(report_path);
    report.write_csv(csv, timings);
  }
  {
    auto plot = open_output(plotdat_path(report_path));
    report.write_plotdat(plot);
  }
  if (!report.complete) {
    err << "error: " << report.failure << "\npartial report written to " << report_path << '\n';
    return kSolverFailure;
  }
  out << "wrote " << report_path << " and " << plotdat_path(report_path) << '\n';
  return kOk;
}

}  // namespace

void write_solution_csv(std::ostream& out, const PolyMesh& mesh, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != mesh.num_vertices()) throw vempb::Error("solution size mismatch");
  out << "id,x,y,z,u\n" << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const Vec3& x = mesh.vertex(i);
    out << i << ',' << x.x() << ',' << x.y() << ',' << x.z() << ',' << u[static_cast<Eigen::Index>(i)] << '\n';
  }
}

void save_solution_csv(const std::string& path, const PolyMesh& mesh, const Eigen::VectorXd& u) {
  auto out = open_output(path);
  write_solution_csv(out, mesh, u);
}

std::string plotdat_path(const std::string& report_path) {
  const std::string ext = ".csv";
  if (report_path.size() > ext.size() && report_path.compare(report_path.size() - ext.size(), ext.size(), ext) == 0) {
    return report_path.substr(0, report_path.size() - ext.size()) + ".plotdat";
  }
  return report_path + ".plotdat";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lowest-order virtual element solver for the regularized Poisson-Boltzmann equation", "vempb"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for element loops (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* mesh = app.add_subcommand("mesh", "generate or inspect meshes");
  mesh->require_subcommand(1);
  auto* gen = mesh->add_subcommand("gen", "generate a mesh and write it in VPM format");
  MeshSpec spec;
  std::string family = "cubic";
  std::string gen_out;
  gen->add_option("--family", family, "cubic, tet or voronoi")->check(CLI::IsMember({"cubic", "tet", "voronoi"}));
  gen->add_option("--n", spec.n, "cells per axis (cubic, tet)");
  gen->add_option("--n-seeds", spec.n_seeds, "number of Voronoi seeds");
  gen->add_option("--rng-seed", spec.rng_seed, "Voronoi seed generator state");
  gen->add_option("-o,--out", gen_out, "output .vpm file")->required();

  auto* check = mesh->add_subcommand("check", "print mesh quality and interface statistics");
  std::string check_path;
  double gamma_min = 0.1;
  double side = 0.5;
  check->add_option("mesh", check_path, "VPM mesh file")->required();
  check->add_option("--gamma-min", gamma_min, "regularity threshold");
  check->add_option("--box-side", side, "side of the molecular box [0, side]^3");

  auto* solve = app.add_subcommand("solve", "solve one problem and write the vertex solution");
  std::string solve_config, solve_out;
  solve->add_option("-c,--config", solve_config, "JSON run configuration")->required();
  solve->add_option("-o,--out", solve_out, "solution CSV (default: output.solution)");

  auto* study = app.add_subcommand("study", "run a convergence study");
  std::string study_config, study_out;
  bool timings = false;
  study->add_option("-c,--config", study_config, "JSON run configuration")->required();
  study->add_option("-o,--out", study_out, "report CSV (default: output.report)");
  study->add_flag("--timings", timings, "add a wall_time column to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  set_thread_count(threads);

  return guarded(err, [&]() -> int {
    if (*gen) {
      spec.family = parse_mesh_family(family);
      return cmd_mesh_gen(spec, gen_out, out);
    }
    if (*check) return cmd_mesh_check(check_path, gamma_min, side, out);
    if (*solve) return cmd_solve(solve_config, solve_out, out, err);
    if (*study) return cmd_study(study_config, study_out, timings, out, err);
    return kValidation;
  });
}

}  // namespace vempb::cli
