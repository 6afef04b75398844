#include "vempb_cli/config.hpp"

#include <vempb/error.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace vempb::cli {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object, rejecting keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + " must be an object");
  }
  void done() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key " + path_ + "." + key);
    }
  }

  template <class T>
  void get(const char* key, T& target) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer() || (std::is_unsigned_v<T> && it->template get<long long>() < 0)) {
        throw ConfigError(path_ + "." + key + " must be a" + (std::is_unsigned_v<T> ? " non-negative" : "n") +
                          " integer");
      }
    }
    try {
      target = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec3 parse_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path + " must be an array of 3 numbers");
  Vec3 x;
  for (int d = 0; d < 3; ++d) {
    if (!j[d].is_number()) throw ConfigError(path + " must be an array of 3 numbers");
    x[d] = j[d].get<double>();
  }
  return x;
}

MeshSpec parse_mesh(const json& j, const std::string& path, MeshSpec spec) {
  ObjectReader r(j, path);
  std::string family = to_string(spec.family);
  r.get("family", family);
  spec.family = parse_mesh_family(family);
  r.get("n", spec.n);
  r.get("n_seeds", spec.n_seeds);
  r.get("rng_seed", spec.rng_seed);
  r.get("path", spec.path);
  r.done();
  return spec;
}

json mesh_to_json(const MeshSpec& m) {
  return {{"family", to_string(m.family)}, {"n", m.n}, {"n_seeds", m.n_seeds}, {"rng_seed", m.rng_seed},
          {"path", m.path}};
}

void validate_mesh(const MeshSpec& m, const std::string& path) {
  switch (m.family) {
    case MeshFamily::cubic:
    case MeshFamily::tet:
      if (m.n < 1) throw ConfigError(path + ".n must be at least 1");
      break;
    case MeshFamily::voronoi:
      if (m.n_seeds < 1) throw ConfigError(path + ".n_seeds must be at least 1");
      break;
    case MeshFamily::file:
      if (m.path.empty()) throw ConfigError(path + ".path is required for family \"file\"");
      break;
  }
}

}  // namespace

LoadSpec LoadConfig::to_spec() const {
  if (mode == LoadSpec::Mode::regularized) return LoadSpec::regularized();
  LoadSpec spec{mode, ManufacturedSolution::by_name(solution)};
  return spec;
}

void RunConfig::validate() const {
  physics.validate();
  solver.validate();
  validate_mesh(mesh, "mesh");
  for (std::size_t i = 0; i < study_levels.size(); ++i) validate_mesh(study_levels[i], "study.levels[" + std::to_string(i) + "]");
  if (study_reference) {
    validate_mesh(*study_reference, "study.reference");
    if (study_reference->family != MeshFamily::cubic && study_reference->family != MeshFamily::tet) {
      throw ConfigError("study.reference must be a cubic or tet mesh");
    }
  }
  if (discretization.quadrature_degree < 0 || discretization.quadrature_degree > kMaxQuadratureDegree) {
    throw ConfigError("discretization.quadrature_degree must lie in [0, " + std::to_string(kMaxQuadratureDegree) + "]");
  }
  load.to_spec().validate();
  if (levelset.kind != "corner_box") throw ConfigError("physics.levelset.kind must be \"corner_box\"");
  if (!(levelset.side > 0.0)) throw ConfigError("physics.levelset.side must be positive");
}

RunConfig parse_run_config(const json& doc) {
  RunConfig c;
  ObjectReader top(doc, "config");

  if (const json* p = top.child("physics")) {
    ObjectReader r(*p, "physics");
    r.get("eps_m", c.physics.eps_m);
    r.get("eps_s", c.physics.eps_s);
    r.get("kappa", c.physics.kappa);
    if (const json* charges = r.child("charges")) {
      if (!charges->is_array()) throw ConfigError("physics.charges must be an array");
      c.physics.charges.clear();
      for (std::size_t i = 0; i < charges->size(); ++i) {
        const std::string path = "physics.charges[" + std::to_string(i) + "]";
        ObjectReader q((*charges)[i], path);
        PointCharge charge;
        q.get("q", charge.strength);
        if (const json* x = q.child("x")) charge.position = parse_point(*x, path + ".x");
        q.done();
        c.physics.charges.push_back(charge);
      }
    }
    if (const json* ls = r.child("levelset")) {
      ObjectReader l(*ls, "physics.levelset");
      l.get("kind", c.levelset.kind);
      l.get("side", c.levelset.side);
      l.done();
    }
    r.done();
  }
  if (const json* m = top.child("mesh")) c.mesh = parse_mesh(*m, "mesh", c.mesh);
  if (const json* l = top.child("load")) {
    ObjectReader r(*l, "load");
    std::string mode = to_string(c.load.mode);
    r.get("mode", mode);
    c.load.mode = parse_load_mode(mode);
    r.get("solution", c.load.solution);
    r.done();
  }
  if (const json* s = top.child("solver")) {
    ObjectReader r(*s, "solver");
    r.get("rel_tol", c.solver.rel_tol);
    r.get("abs_tol", c.solver.abs_tol);
    r.get("max_iterations", c.solver.max_iterations);
    r.get("max_halvings", c.solver.max_halvings);
    r.get("cg_tol", c.solver.cg_tol);
    r.get("cg_max_iterations", c.solver.cg_max_iterations);
    r.done();
  }
  if (const json* d = top.child("discretization")) {
    ObjectReader r(*d, "discretization");
    r.get("quadrature_degree", c.discretization.quadrature_degree);
    std::string stab = to_string(c.discretization.stabilization);
    r.get("stabilization", stab);
    c.discretization.stabilization = parse_stabilization(stab);
    r.done();
  }
  if (const json* s = top.child("study")) {
    ObjectReader r(*s, "study");
    if (const json* levels = r.child("levels")) {
      if (!levels->is_array()) throw ConfigError("study.levels must be an array");
      for (std::size_t i = 0; i < levels->size(); ++i) {
        c.study_levels.push_back(parse_mesh((*levels)[i], "study.levels[" + std::to_string(i) + "]", c.mesh));
      }
    }
    if (const json* ref = r.child("reference"); ref && !ref->is_null()) {
      c.study_reference = parse_mesh(*ref, "study.reference", c.mesh);
    }
    r.done();
  }
  if (const json* o = top.child("output")) {
    ObjectReader r(*o, "output");
    r.get("solution", c.output.solution);
    r.get("report", c.output.report);
    r.done();
  }
  top.done();

  const double side = c.levelset.side;
  c.physics.levelset = LevelSet::corner_box(side);
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
  json charges = json::array();
  for (const auto& q : c.physics.charges) {
    charges.push_back({{"q", q.strength}, {"x", {q.position.x(), q.position.y(), q.position.z()}}});
  }
  json levels = json::array();
  for (const auto& l : c.study_levels) levels.push_back(mesh_to_json(l));
  return {
      {"physics",
       {{"eps_m", c.physics.eps_m},
        {"eps_s", c.physics.eps_s},
        {"kappa", c.physics.kappa},
        {"charges", charges},
        {"levelset", {{"kind", c.levelset.kind}, {"side", c.levelset.side}}}}},
      {"mesh", mesh_to_json(c.mesh)},
      {"load", {{"mode", to_string(c.load.mode)}, {"solution", c.load.solution}}},
      {"solver",
       {{"rel_tol", c.solver.rel_tol},
        {"abs_tol", c.solver.abs_tol},
        {"max_iterations", c.solver.max_iterations},
        {"max_halvings", c.solver.max_halvings},
        {"cg_tol", c.solver.cg_tol},
        {"cg_max_iterations", c.solver.cg_max_iterations}}},
      {"discretization",
       {{"quadrature_degree", c.discretization.quadrature_degree},
        {"stabilization", to_string(c.discretization.stabilization)}}},
      {"study",
       {{"levels", levels}, {"reference", c.study_reference ? mesh_to_json(*c.study_reference) : json(nullptr)}}},
      {"output", {{"solution", c.output.solution}, {"report", c.output.report}}},
  };
}

}  // namespace vempb::cli
