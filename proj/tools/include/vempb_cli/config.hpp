#pragma once

#include <vempb/discretization.hpp>
#include <vempb/forms.hpp>
#include <vempb/mesh_generators.hpp>
#include <vempb/newton.hpp>
#include <vempb/physics.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace vempb::cli {

struct LevelSetConfig {
  std::string kind = "corner_box";
  double side = 0.5;
};

struct LoadConfig {
  LoadSpec::Mode mode = LoadSpec::Mode::manufactured;
  std::string solution = "sine";

  LoadSpec to_spec() const;
};

struct OutputConfig {
  std::string solution = "solution.csv";
  std::string report = "report.csv";
};

/// Everything a run needs. Parsed from JSON with every key optional; unknown keys and
/// wrongly typed values are rejected.
struct RunConfig {
  PhysicsConfig physics;
  LevelSetConfig levelset;
  MeshSpec mesh;
  LoadConfig load;
  NewtonConfig solver;
  DiscretizationOptions discretization;
  std::vector<MeshSpec> study_levels;
  std::optional<MeshSpec> study_reference;
  OutputConfig output;

  /// Throws ConfigError on any inconsistent value.
  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
/// Effective configuration including defaults; parse_run_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace vempb::cli
