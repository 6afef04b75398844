#include "vempb/analysis.hpp"

#include "vempb/error.hpp"
#include "vempb/parallel.hpp"
#include "vempb/projectors.hpp"

#include <cmath>
#include <vector>

namespace vempb {

namespace {

Vec3 projected_gradient(const CellProjectors& p, const Eigen::Vector4d& coeffs) {
  return coeffs.tail<3>() / p.basis.scale();
}

ErrorNorms sum_cells(const std::vector<ErrorNorms>& per_cell) {
  ErrorNorms total;
  for (const auto& e : per_cell) {
    total.l2 += e.l2;
    total.h1 += e.h1;
  }
  return {std::sqrt(total.l2), std::sqrt(total.h1)};
}

void check_size(const PolyMesh& mesh, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != mesh.num_vertices()) {
    throw Error("solution has " + std::to_string(u.size()) + " entries but the mesh has " +
                std::to_string(mesh.num_vertices()) + " vertices");
  }
}

}  // namespace

ErrorNorms compute_errors(const PolyMesh& mesh, const Eigen::VectorXd& u_h, const ManufacturedSolution& exact,
                          int quadrature_degree) {
  check_size(mesh, u_h);
  std::vector<ErrorNorms> per_cell(mesh.num_cells());
  parallel_for(mesh.num_cells(), [&](std::size_t c) {
    const CellProjectors p = cell_projectors(mesh, c);
    const Eigen::Vector4d coeffs = p.apply(p.gather(u_h));
    const Vec3 grad_h = projected_gradient(p, coeffs);
    const QuadratureRule rule = cell_quadrature(mesh, c, quadrature_degree);
    ErrorNorms e;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3& x = rule.points[q];
      const double dv = exact.value(x) - p.eval(coeffs, x);
      e.l2 += rule.weights[q] * dv * dv;
      e.h1 += rule.weights[q] * (exact.gradient(x) - grad_h).squaredNorm();
    }
    per_cell[c] = e;
  });
  return sum_cells(per_cell);
}

double error_l2(const PolyMesh& mesh, const Eigen::VectorXd& u_h, const ManufacturedSolution& exact,
                int quadrature_degree) {
  return compute_errors(mesh, u_h, exact, quadrature_degree).l2;
}

double error_h1(const PolyMesh& mesh, const Eigen::VectorXd& u_h, const ManufacturedSolution& exact,
                int quadrature_degree) {
  return compute_errors(mesh, u_h, exact, quadrature_degree).h1;
}

double mesh_size(const PolyMesh& mesh) {
  if (mesh.num_cells() == 0) throw Error("mesh_size: empty mesh");
  return std::cbrt(mesh.total_volume() / static_cast<double>(mesh.num_cells()));
}

double convergence_order(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(h_coarse > 0.0) || !(h_fine > 0.0)) {
    throw Error("convergence_order: errors and mesh sizes must be positive");
  }
  if (!(h_fine < h_coarse)) throw Error("convergence_order: mesh sizes must decrease");
  return std::log(e_fine / e_coarse) / std::log(h_fine / h_coarse);
}

double fitted_slope(std::span<const double> h, std::span<const double> e, std::size_t last) {
  if (h.size() != e.size()) throw Error("fitted_slope: size mismatch");
  const std::size_t count = std::min(last, h.size());
  if (count < 2) throw Error("fitted_slope: need at least two points");
  const std::size_t first = h.size() - count;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = first; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(e[i] > 0.0)) throw Error("fitted_slope: values must be positive");
    mx += std::log(h[i]);
    my += std::log(e[i]);
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = first; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(e[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error("fitted_slope: mesh sizes coincide");
  return sxy / sxx;
}

ErrorNorms compare_to_reference(const StructuredSolution& coarse, const StructuredSolution& reference,
                                int quadrature_degree) {
  if (coarse.family != reference.family ||
      (coarse.family != MeshFamily::cubic && coarse.family != MeshFamily::tet)) {
    throw Error("reference comparison needs nested cubic or tet meshes of the same family");
  }
  if (coarse.n < 1 || reference.n < coarse.n || reference.n % coarse.n != 0) {
    throw Error("reference comparison needs the fine n to be a multiple of the coarse n (meshes are not nested)");
  }
  const std::size_t cells_per_cube = coarse.family == MeshFamily::tet ? 6 : 1;
  auto expected = [&](int n) { return cells_per_cube * static_cast<std::size_t>(n) * n * n; };
  if (coarse.mesh.num_cells() != expected(coarse.n) || reference.mesh.num_cells() != expected(reference.n)) {
    throw Error("reference comparison: mesh does not match its structured family and size");
  }
  check_size(coarse.mesh, coarse.u);
  check_size(reference.mesh, reference.u);

  std::vector<CellProjectors> coarse_proj(coarse.mesh.num_cells());
  parallel_for(coarse_proj.size(), [&](std::size_t c) { coarse_proj[c] = cell_projectors(coarse.mesh, c); });

  std::vector<ErrorNorms> per_cell(reference.mesh.num_cells());
  parallel_for(per_cell.size(), [&](std::size_t f) {
    const CellProjectors pf = cell_projectors(reference.mesh, f);
    const Eigen::Vector4d cf = pf.apply(pf.gather(reference.u));
    const int c = locate_structured_cell(coarse.family, coarse.n, reference.mesh.cell(f).centroid);
    const CellProjectors& pc = coarse_proj[static_cast<std::size_t>(c)];
    const Eigen::Vector4d cc = pc.apply(pc.gather(coarse.u));
    const QuadratureRule rule = cell_quadrature(reference.mesh, f, quadrature_degree);
    ErrorNorms e;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double dv = pf.eval(cf, rule.points[q]) - pc.eval(cc, rule.points[q]);
      e.l2 += rule.weights[q] * dv * dv;
    }
    e.h1 = rule.measure() * (projected_gradient(pf, cf) - projected_gradient(pc, cc)).squaredNorm();
    per_cell[f] = e;
  });
  return sum_cells(per_cell);
}

}  // namespace vempb
