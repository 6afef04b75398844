#include <vempb/analysis.hpp>
#include <vempb/error.hpp>
#include <vempb/forms.hpp>
#include <vempb/mesh_generators.hpp>
#include <vempb/mesh_io.hpp>
#include <vempb_cli/app.hpp>
#include <vempb_cli/config.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <string>
#include <vector>

using namespace vempb;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vempb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("vempb_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string write_config(const TempDir& dir, const std::string& name, const json& j) {
  const std::string path = dir.file(name);
  write(path, j.dump(2));
  return path;
}

json linear_config() {
  return json::parse(R"({
    "physics": {"eps_m": 1.0, "eps_s": 1.0, "kappa": 0.0, "charges": []},
    "mesh": {"family": "cubic", "n": 4},
    "load": {"mode": "manufactured", "solution": "sine"}
  })");
}

Eigen::VectorXd read_solution(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "id,x,y,z,u");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("mesh gen writes a readable mesh") {
    TempDir dir;
    const auto r = run_cli({"mesh", "gen", "--family", "cubic", "--n", "2", "-o", dir.file("m.vpm")});
    CHECK(r.code == cli::kOk);
    const PolyMesh mesh = load_mesh(dir.file("m.vpm"));
    CHECK(mesh.num_vertices() == 27);
    CHECK(mesh.num_cells() == 8);

    CHECK(run_cli({"mesh", "gen", "--family", "voronoi", "--n-seeds", "20", "--rng-seed", "4", "-o",
                   dir.file("v.vpm")}).code == cli::kOk);
    CHECK(load_mesh(dir.file("v.vpm")).num_cells() == 20);
    CHECK(run_cli({"mesh", "gen", "--family", "blob", "-o", dir.file("x.vpm")}).code == cli::kValidation);
    CHECK(run_cli({"mesh", "gen", "--family", "cubic", "--n", "0", "-o", dir.file("x.vpm")}).code == cli::kValidation);
  }

  TEST_CASE("mesh check") {
    TempDir dir;
    REQUIRE(run_cli({"mesh", "gen", "--family", "voronoi", "--n-seeds", "64", "-o", dir.file("v.vpm")}).code == 0);
    const auto ok = run_cli({"mesh", "check", dir.file("v.vpm")});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out.find("cells 64") != std::string::npos);
    CHECK(ok.out.find("interface cells ") != std::string::npos);

    const std::string text = slurp(dir.file("v.vpm"));
    write(dir.file("cut.vpm"), text.substr(0, text.size() / 2));
    const auto bad = run_cli({"mesh", "check", dir.file("cut.vpm")});
    CHECK(bad.code == cli::kValidation);
    CHECK(bad.err.find("line ") != std::string::npos);

    CHECK(run_cli({"mesh", "check", dir.file("missing.vpm")}).code == cli::kValidation);
  }

  TEST_CASE("solve on the linear case") {
    TempDir dir;
    const std::string cfg = write_config(dir, "lin.json", linear_config());
    const auto r = run_cli({"solve", "-c", cfg, "-o", dir.file("a.csv")});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("converged in 1 iterations") != std::string::npos);
    REQUIRE(run_cli({"solve", "-c", cfg, "-o", dir.file("b.csv")}).code == cli::kOk);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  }

  TEST_CASE("solve results do not depend on the thread count") {
    TempDir dir;
    json j = linear_config();
    j.erase("physics");
    j["mesh"] = {{"family", "voronoi"}, {"n_seeds", 64}, {"rng_seed", 3}};
    const std::string cfg = write_config(dir, "v.json", j);
    REQUIRE(run_cli({"--threads", "1", "solve", "-c", cfg, "-o", dir.file("t1.csv")}).code == cli::kOk);
    REQUIRE(run_cli({"--threads", "3", "solve", "-c", cfg, "-o", dir.file("t3.csv")}).code == cli::kOk);
    CHECK(slurp(dir.file("t1.csv")) == slurp(dir.file("t3.csv")));
  }

  TEST_CASE("reported error matches a recomputation from the saved solution") {
    TempDir dir;
    json j = linear_config();
    j.erase("physics");
    j["mesh"]["n"] = 8;
    const std::string cfg = write_config(dir, "m.json", j);
    const auto r = run_cli({"solve", "-c", cfg, "-o", dir.file("u.csv")});
    REQUIRE(r.code == cli::kOk);
    const double reported = value_after(r.out, "e_L2: ");
    const Eigen::VectorXd u = read_solution(dir.file("u.csv"));
    const double recomputed = error_l2(generate_cube_mesh(8), u, ManufacturedSolution::sine());
    CHECK(std::abs(reported - recomputed) <= 1e-12);
  }

  TEST_CASE("solver failure exits with 3 and keeps the partial state") {
    TempDir dir;
    json j = linear_config();
    j.erase("physics");
    j["solver"] = {{"max_iterations", 1}};
    const std::string cfg = write_config(dir, "f.json", j);
    const auto r = run_cli({"solve", "-c", cfg, "-o", dir.file("u.csv")});
    CHECK(r.code == cli::kSolverFailure);
    CHECK(fs::exists(dir.file("u.csv.failed")));
    CHECK_FALSE(fs::exists(dir.file("u.csv")));
  }

  TEST_CASE("config validation") {
    TempDir dir;
    json unknown = linear_config();
    unknown["physics"]["epsilon"] = 3.0;
    auto r = run_cli({"solve", "-c", write_config(dir, "u.json", unknown)});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("unknown key physics.epsilon") != std::string::npos);

    json wrong_type = linear_config();
    wrong_type["mesh"]["n"] = 2.5;
    CHECK(run_cli({"solve", "-c", write_config(dir, "w.json", wrong_type)}).code == cli::kValidation);

    json negative = linear_config();
    negative["physics"]["eps_m"] = -1.0;
    CHECK(run_cli({"solve", "-c", write_config(dir, "n.json", negative)}).code == cli::kValidation);

    write(dir.file("broken.json"), "{ \"mesh\": ");
    CHECK(run_cli({"solve", "-c", dir.file("broken.json")}).code == cli::kValidation);
    CHECK(run_cli({"solve", "-c", dir.file("absent.json")}).code == cli::kValidation);
    CHECK(run_cli({"solve"}).code == cli::kValidation);
    CHECK(run_cli({"frobnicate"}).code == cli::kValidation);
    CHECK(run_cli({"--help"}).code == cli::kOk);
  }

  TEST_CASE("config round trip") {
    json j = linear_config();
    j["study"] = {{"levels", json::array({{{"n", 2}}, {{"n", 4}}})}};
    const cli::RunConfig parsed = cli::parse_run_config(j);
    const json echoed = cli::to_json(parsed);
    CHECK(cli::to_json(cli::parse_run_config(echoed)) == echoed);
    CHECK(echoed["physics"]["kappa"] == 0.0);
    CHECK(echoed["study"]["levels"].size() == 2);

    const cli::RunConfig defaults = cli::parse_run_config(json::object());
    CHECK(defaults.physics.eps_m == 2.0);
    CHECK(defaults.physics.eps_s == 80.0);
    CHECK(defaults.physics.charges.size() == 1);
  }

  TEST_CASE("study command") {
    TempDir dir;
    json j = linear_config();
    j.erase("physics");
    j["study"] = {{"levels", json::array({{{"n", 2}}, {{"n", 4}}})}};
    const std::string cfg = write_config(dir, "s.json", j);
    const auto r = run_cli({"study", "-c", cfg, "-o", dir.file("report.csv")});
    REQUIRE(r.code == cli::kOk);
    CHECK(fs::exists(dir.file("report.plotdat")));

    const std::string report = slurp(dir.file("report.csv"));
    std::istringstream lines(report);
    std::string line, config_line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) {
      if (line.rfind("# config: ", 0) == 0) config_line = line.substr(10);
      else if (!line.empty() && line[0] != '#' && line.rfind("level", 0) != 0) rows.push_back(line);
    }
    REQUIRE(rows.size() == 2);
    // One order per norm: empty on the first row, present on the second.
    CHECK(rows[0].find(",,") != std::string::npos);
    CHECK(rows[1].find(",,") == std::string::npos);

    // Re-running from the echoed configuration reproduces the report.
    REQUIRE_FALSE(config_line.empty());
    const std::string echoed = write_config(dir, "echo.json", json::parse(config_line));
    REQUIRE(run_cli({"study", "-c", echoed, "-o", dir.file("again.csv")}).code == cli::kOk);
    CHECK(slurp(dir.file("again.csv")) == report);
    CHECK(slurp(dir.file("again.plotdat")) == slurp(dir.file("report.plotdat")));

    json single = j;
    single["study"]["levels"] = json::array({{{"n", 2}}});
    const auto one = run_cli({"study", "-c", write_config(dir, "one.json", single)});
    CHECK(one.code == cli::kValidation);
    CHECK(one.err.find("need >= 2 levels") != std::string::npos);
  }

  TEST_CASE("incomplete study exits with 3") {
    TempDir dir;
    json j = linear_config();
    j.erase("physics");
    j["solver"] = {{"max_iterations", 1}};
    j["study"] = {{"levels", json::array({{{"n", 2}}, {{"n", 4}}})}};
    const auto r = run_cli({"study", "-c", write_config(dir, "s.json", j), "-o", dir.file("r.csv")});
    CHECK(r.code == cli::kSolverFailure);
    CHECK(fs::exists(dir.file("r.csv.failed")));
  }

  TEST_CASE("output helpers") {
    CHECK(cli::plotdat_path("out/report.csv") == "out/report.plotdat");
    CHECK(cli::plotdat_path("report") == "report.plotdat");
    std::ostringstream csv;
    const PolyMesh mesh = generate_cube_mesh(1);
    cli::write_solution_csv(csv, mesh, Eigen::VectorXd::LinSpaced(8, 0, 7));
    CHECK(csv.str().rfind("id,x,y,z,u\n0,0,0,0,0\n1,1,0,0,1\n", 0) == 0);
    CHECK_THROWS_AS(cli::write_solution_csv(csv, mesh, Eigen::VectorXd::Zero(3)), vempb::Error);
  }
}
