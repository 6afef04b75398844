#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>

namespace vempb {
class PolyMesh;
}

namespace vempb::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kSolverFailure = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Solution CSV: header "id,x,y,z,u", one row per vertex, 17 significant digits.
void write_solution_csv(std::ostream& out, const PolyMesh& mesh, const Eigen::VectorXd& u);
void save_solution_csv(const std::string& path, const PolyMesh& mesh, const Eigen::VectorXd& u);

/// `report.csv` -> `report.plotdat`; other names get the suffix appended.
std::string plotdat_path(const std::string& report_path);

}  // namespace vempb::cli
