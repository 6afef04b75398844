#include "oracles.hpp"

#include <vempb/discretization.hpp>
#include <vempb/error.hpp>
#include <vempb/forms.hpp>
#include <vempb/mesh_generators.hpp>
#include <vempb/newton.hpp>
#include <vempb/parallel.hpp>
#include <vempb/sparse.hpp>

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

using namespace vempb;
using vempb::testing::Rng;

namespace {

PhysicsConfig linear_physics(double eps = 1.0) {
  PhysicsConfig p;
  p.eps_m = eps;
  p.eps_s = eps;
  p.kappa = 0.0;
  p.charges.clear();
  return p;
}

CsrMatrix dense_to_csr(const Eigen::MatrixXd& d) {
  const auto n = static_cast<std::size_t>(d.rows());
  std::vector<std::vector<int>> cols(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) cols[i].push_back(static_cast<int>(j));
  CsrMatrix a = CsrMatrix::from_pattern(n, cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) a.val[k] = d(static_cast<Eigen::Index>(i), a.col[k]);
  return a;
}

Eigen::MatrixXd dense_assembly(const Discretization& disc) {
  const auto n = static_cast<Eigen::Index>(disc.num_dofs());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t c = 0; c < disc.mesh().num_cells(); ++c) {
    const auto& p = disc.projectors(c);
    const Eigen::MatrixXd k = local_stiffness(p, disc.quadrature(c), disc.physics(), disc.options().stabilization);
    for (std::size_t i = 0; i < p.num_dofs(); ++i)
      for (std::size_t j = 0; j < p.num_dofs(); ++j)
        a(p.vertices[i], p.vertices[j]) += k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return a;
}

Eigen::VectorXd random_interior_state(const Discretization& disc, Rng& rng, double amplitude) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(disc.num_dofs()));
  for (Eigen::Index i = 0; i < u.size(); ++i)
    u[i] = disc.dirichlet_mask()[static_cast<std::size_t>(i)] ? 0.0 : vempb::testing::uniform(rng, -amplitude, amplitude);
  return u;
}

// Dense solve of the free block with zero boundary values.
Eigen::VectorXd dense_dirichlet_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& f, const std::vector<bool>& mask) {
  std::vector<Eigen::Index> free;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) free.push_back(static_cast<Eigen::Index>(i));
  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd af(m, m);
  Eigen::VectorXd ff(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    ff[i] = f[free[i]];
    for (Eigen::Index j = 0; j < m; ++j) af(i, j) = a(free[i], free[j]);
  }
  const Eigen::VectorXd uf = af.ldlt().solve(ff);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(f.size());
  for (Eigen::Index i = 0; i < m; ++i) u[free[i]] = uf[i];
  return u;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("csr pattern and products") {
    CsrMatrix a = CsrMatrix::from_pattern(3, {{2, 0, 2}, {1}, {0, 2}});
    CHECK(a.nnz() == 5);
    CHECK(a.col[0] == 0);
    CHECK(a.col[1] == 2);
    CHECK(a.find(1, 0) < 0);
    a.val = {4, 1, 3, 1, 5};
    CHECK(a.coeff(0, 2) == 1.0);
    CHECK(a.coeff(1, 2) == 0.0);
    CHECK(a.symmetry_defect() == 0.0);
    const Eigen::VectorXd x = Eigen::Vector3d(1, 2, 3);
    CHECK((a * x - a.to_dense() * x).norm() == 0.0);
    CHECK(a.diagonal() == Eigen::Vector3d(4, 3, 5));
    a.set_zero();
    CHECK(a.to_dense().norm() == 0.0);
  }

  TEST_CASE("conjugate gradients") {
    SUBCASE("identity") {
      const CsrMatrix id = dense_to_csr(Eigen::MatrixXd::Identity(10, 10));
      const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(10, -1, 2);
      const auto r = cg_solve(id, b);
      CHECK(r.iterations == 1);
      CHECK((r.x - b).norm() == 0.0);
    }
    SUBCASE("zero right-hand side") {
      const CsrMatrix id = dense_to_csr(2.0 * Eigen::MatrixXd::Identity(4, 4));
      const auto r = cg_solve(id, Eigen::VectorXd::Zero(4));
      CHECK(r.iterations == 0);
      CHECK(r.x.norm() == 0.0);
    }
    SUBCASE("random SPD against a dense factorization") {
      Rng rng(10);
      Eigen::MatrixXd m(50, 50);
      for (auto& v : m.reshaped()) v = vempb::testing::uniform(rng, -1, 1);
      const Eigen::MatrixXd spd = m * m.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
      Eigen::VectorXd b(50);
      for (auto& v : b) v = vempb::testing::uniform(rng, -1, 1);
      const auto r = cg_solve(dense_to_csr(spd), b, {1e-14, 0});
      const Eigen::VectorXd direct = spd.ldlt().solve(b);
      CHECK((r.x - direct).norm() <= 1e-10 * direct.norm());
      CHECK(r.relative_residual <= 1e-14);
      // Deterministic.
      CHECK((cg_solve(dense_to_csr(spd), b, {1e-14, 0}).x - r.x).norm() == 0.0);
    }
    SUBCASE("failures") {
      Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(3, 3);
      indefinite(1, 1) = 1.0;
      indefinite(0, 2) = indefinite(2, 0) = 5.0;
      CHECK_THROWS_AS(cg_solve(dense_to_csr(indefinite), Eigen::Vector3d(1, 0, -1)), ConvergenceError);
      Rng rng(3);
      Eigen::MatrixXd m(30, 30);
      for (auto& v : m.reshaped()) v = vempb::testing::uniform(rng, -1, 1);
      const Eigen::MatrixXd spd = m * m.transpose() + 1e-3 * Eigen::MatrixXd::Identity(30, 30);
      CHECK_THROWS_AS(cg_solve(dense_to_csr(spd), Eigen::VectorXd::Ones(30), {1e-14, 2}), ConvergenceError);
    }
  }

  TEST_CASE("dirichlet constraints") {
    const Discretization disc(generate_cube_mesh(3), linear_physics());
    SparseSystem sys{disc.stiffness(), disc.load(LoadSpec::manufactured(ManufacturedSolution::sine())),
                     disc.dirichlet_mask()};
    apply_dirichlet(sys);
    const Eigen::MatrixXd d = sys.matrix.to_dense();
    for (std::size_t i = 0; i < sys.dirichlet.size(); ++i) {
      if (!sys.dirichlet[i]) continue;
      const auto k = static_cast<Eigen::Index>(i);
      CHECK(sys.rhs[k] == 0.0);
      CHECK(d(k, k) == 1.0);
      CHECK(d.row(k).cwiseAbs().sum() == 1.0);
      CHECK(d.col(k).cwiseAbs().sum() == 1.0);
    }
    CHECK(sys.matrix.symmetry_defect() <= 1e-13);
    const auto sol = cg_solve(sys.matrix, sys.rhs);
    for (std::size_t i = 0; i < sys.dirichlet.size(); ++i)
      if (sys.dirichlet[i]) CHECK(sol.x[static_cast<Eigen::Index>(i)] == 0.0);
  }

  TEST_CASE("all-boundary mesh gives an identity system") {
    const Discretization disc(generate_cube_mesh(1), linear_physics());
    SparseSystem sys{disc.stiffness(), Eigen::VectorXd::Ones(8), disc.dirichlet_mask()};
    apply_dirichlet(sys);
    CHECK((sys.matrix.to_dense() - Eigen::MatrixXd::Identity(8, 8)).norm() == 0.0);
    CHECK(cg_solve(sys.matrix, sys.rhs).x.norm() == 0.0);
  }

  TEST_CASE("constrained energy matches a Lagrange-multiplier solve") {
    const Discretization disc(generate_cube_mesh(3), linear_physics(1.0));
    const Eigen::MatrixXd a = disc.stiffness().to_dense();
    const Eigen::VectorXd f = disc.load(LoadSpec::manufactured(ManufacturedSolution::sine()));
    const auto& mask = disc.dirichlet_mask();
    const auto n = a.rows();
    const auto nb = static_cast<Eigen::Index>(std::count(mask.begin(), mask.end(), true));

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + nb, n + nb);
    kkt.topLeftCorner(n, n) = a;
    Eigen::Index row = n;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!mask[static_cast<std::size_t>(i)]) continue;
      kkt(row, i) = kkt(i, row) = 1.0;
      ++row;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + nb);
    rhs.head(n) = f;
    const Eigen::VectorXd u_kkt = kkt.fullPivLu().solve(rhs).head(n);

    SparseSystem sys{disc.stiffness(), f, mask};
    apply_dirichlet(sys);
    const Eigen::VectorXd u = cg_solve(sys.matrix, sys.rhs, {1e-14, 0}).x;
    auto energy = [&](const Eigen::VectorXd& v) { return 0.5 * v.dot(a * v) - f.dot(v); };
    CHECK(std::abs(energy(u) - energy(u_kkt)) <= 1e-10);
  }

  TEST_CASE("global stiffness") {
    SUBCASE("single cube equals the local matrix") {
      const PhysicsConfig physics = linear_physics();
      const Discretization disc(generate_cube_mesh(1), physics);
      const auto& p = disc.projectors(0);
      const Eigen::MatrixXd k = local_stiffness(p, disc.quadrature(0), physics);
      const Eigen::MatrixXd a = disc.stiffness().to_dense();
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
          CHECK(a(p.vertices[i], p.vertices[j]) == k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    SUBCASE("dense assembly oracle, kernel and symmetry") {
      for (const auto& mesh : {generate_cube_mesh(2), generate_voronoi_mesh(30, 3), generate_tet_mesh(2)}) {
        const Discretization disc(mesh, PhysicsConfig{});
        const Eigen::MatrixXd a = disc.stiffness().to_dense();
        const double scale = a.cwiseAbs().maxCoeff();
        CHECK((a - dense_assembly(disc)).cwiseAbs().maxCoeff() <= 1e-13 * scale);
        CHECK(disc.stiffness().symmetry_defect() <= 1e-13 * scale);
        CHECK((disc.stiffness() * Eigen::VectorXd::Ones(a.rows())).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        CHECK((assemble_linear(disc).to_dense() - a).norm() == 0.0);
      }
    }
  }

  TEST_CASE("assembly is invariant under cell permutation") {
    const PolyMesh mesh = generate_voronoi_mesh(64, 31);
    std::vector<std::size_t> order(mesh.num_cells());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), Rng(8));
    const Discretization a(mesh, PhysicsConfig{});
    const Discretization b(vempb::testing::reorder_cells(mesh, order), PhysicsConfig{});
    const double scale = a.stiffness().to_dense().cwiseAbs().maxCoeff();
    CHECK((a.stiffness().to_dense() - b.stiffness().to_dense()).cwiseAbs().maxCoeff() <= 1e-13 * scale);
    Rng rng(2);
    const Eigen::VectorXd u = random_interior_state(a, rng, 1.0);
    const auto spec = LoadSpec::manufactured(ManufacturedSolution::sine());
    const Eigen::VectorXd ra = assemble_residual(a, spec, u);
    const Eigen::VectorXd rb = assemble_residual(b, spec, u);
    CHECK((ra - rb).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, ra.cwiseAbs().maxCoeff()));
    CHECK((assemble_jacobian(a, u).to_dense() - assemble_jacobian(b, u).to_dense()).cwiseAbs().maxCoeff() <=
          1e-13 * scale);
  }

  TEST_CASE("assembly does not depend on the thread count") {
    const PolyMesh mesh = generate_voronoi_mesh(64, 2);
    const int saved = thread_count();
    set_thread_count(1);
    const Discretization serial(mesh, PhysicsConfig{});
    set_thread_count(4);
    const Discretization threaded(mesh, PhysicsConfig{});
    Rng rng(7);
    const Eigen::VectorXd u = random_interior_state(serial, rng, 1.0);
    const auto spec = LoadSpec::manufactured(ManufacturedSolution::sine());
    CHECK(serial.stiffness().val == threaded.stiffness().val);
    const Eigen::VectorXd r1 = assemble_residual(serial, spec, u);
    const Eigen::VectorXd r4 = assemble_residual(threaded, spec, u);
    CHECK((r1 - r4).norm() == 0.0);
    set_thread_count(saved);
  }

  TEST_CASE("residual and jacobian") {
    const Discretization disc(generate_cube_mesh(4), PhysicsConfig{});
    Rng rng(12);
    const auto spec = LoadSpec::manufactured(ManufacturedSolution::sine());
    const Eigen::VectorXd u = random_interior_state(disc, rng, 0.5);
    const Eigen::VectorXd r = assemble_residual(disc, spec, u);
    for (std::size_t i = 0; i < disc.num_dofs(); ++i)
      if (disc.dirichlet_mask()[i]) CHECK(r[static_cast<Eigen::Index>(i)] == 0.0);

    const CsrMatrix jac = assemble_jacobian(disc, u);
    CHECK(jac.symmetry_defect() <= 1e-13 * jac.to_dense().cwiseAbs().maxCoeff());
    const Eigen::MatrixXd dense = jac.to_dense();
    Eigen::VectorXd dir = random_interior_state(disc, rng, 1.0);
    const double h = 1e-6;
    const Eigen::VectorXd fd = (assemble_residual(disc, spec, u + h * dir) - assemble_residual(disc, spec, u - h * dir)) / (2 * h);
    Eigen::VectorXd jd = dense * dir;
    for (std::size_t i = 0; i < disc.num_dofs(); ++i)
      if (disc.dirichlet_mask()[i]) jd[static_cast<Eigen::Index>(i)] = 0.0;
    CHECK((fd - jd).norm() <= 1e-6 * jd.norm());

    // Free block is SPD.
    std::vector<Eigen::Index> free;
    for (std::size_t i = 0; i < disc.num_dofs(); ++i)
      if (!disc.dirichlet_mask()[i]) free.push_back(static_cast<Eigen::Index>(i));
    Eigen::MatrixXd block(free.size(), free.size());
    for (std::size_t i = 0; i < free.size(); ++i)
      for (std::size_t j = 0; j < free.size(); ++j) block(i, j) = dense(free[i], free[j]);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(block).eigenvalues()[0] > 0.0);
  }

  TEST_CASE("linear case reduces to the stiffness") {
    const Discretization disc(generate_voronoi_mesh(40, 6), linear_physics(2.0));
    CHECK_FALSE(disc.is_nonlinear());
    Rng rng(13);
    const Eigen::VectorXd u = random_interior_state(disc, rng, 1.0);
    const auto spec = LoadSpec::manufactured(ManufacturedSolution::sine());
    const Eigen::VectorXd f = disc.load(spec);
    Eigen::VectorXd expected = disc.stiffness() * u - f;
    for (std::size_t i = 0; i < disc.num_dofs(); ++i)
      if (disc.dirichlet_mask()[i]) expected[static_cast<Eigen::Index>(i)] = 0.0;
    CHECK((assemble_residual(disc, spec, u) - expected).norm() <= 1e-13 * std::max(1.0, expected.norm()));
  }

  TEST_CASE("newton on the linear case") {
    for (const auto& mesh : {generate_cube_mesh(4), generate_voronoi_mesh(64, 3)}) {
      const Discretization disc(mesh, linear_physics(1.0));
      const auto spec = LoadSpec::manufactured(ManufacturedSolution::sine());
      NewtonConfig cfg;
      cfg.cg_tol = 1e-14;
      const auto res = newton_solve(disc, spec, cfg);
      CHECK(res.report.converged);
      CHECK(res.report.iterations == 1);
      const Eigen::VectorXd oracle =
          dense_dirichlet_solve(disc.stiffness().to_dense(), disc.load(spec), disc.dirichlet_mask());
      CHECK((res.u - oracle).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("newton with zero load returns immediately") {
    const Discretization disc(generate_cube_mesh(3), linear_physics());
    const auto res = newton_solve(disc, LoadSpec::regularized());
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 0);
    CHECK(res.u.norm() == 0.0);
  }

  TEST_CASE("newton on the nonlinear manufactured problem") {
    const Discretization disc(generate_cube_mesh(4), PhysicsConfig{});
    CHECK(disc.is_nonlinear());
    const auto spec = LoadSpec::manufactured(ManufacturedSolution::sine());
    const auto res = newton_solve(disc, spec);
    const auto& hist = res.report.residual_history;
    CHECK(res.report.converged);
    CHECK(res.report.iterations <= 8);
    CHECK(hist.back() <= 1e-10 * hist.front());
    for (std::size_t k = 1; k < hist.size(); ++k) {
      CHECK(std::isfinite(hist[k]));
      CHECK(hist[k] < hist[k - 1]);
    }
    CHECK(res.report.cg_iterations.size() == static_cast<std::size_t>(res.report.iterations));
    CHECK(assemble_residual(disc, spec, res.u).norm() <= 1e-10 * hist.front() * (1 + 1e-6));
    for (std::size_t i = 0; i < disc.num_dofs(); ++i)
      if (disc.dirichlet_mask()[i]) CHECK(res.u[static_cast<Eigen::Index>(i)] == 0.0);
    CHECK(res.report.max_abs_u == doctest::Approx(res.u.cwiseAbs().maxCoeff()));

    NewtonConfig longer;
    longer.max_iterations = 100;
    const auto again = newton_solve(disc, spec, longer);
    CHECK((again.u - res.u).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("regularized problem converges with damping available") {
    const Discretization disc(generate_voronoi_mesh(64, 1), PhysicsConfig{});
    const auto res = newton_solve(disc, LoadSpec::regularized());
    CHECK(res.report.converged);
    for (std::size_t k = 1; k < res.report.residual_history.size(); ++k)
      CHECK(res.report.residual_history[k] < res.report.residual_history[k - 1]);
  }

  TEST_CASE("newton failure carries the partial state") {
    const Discretization disc(generate_cube_mesh(4), PhysicsConfig{});
    NewtonConfig cfg;
    cfg.max_iterations = 1;
    try {
      (void)newton_solve(disc, LoadSpec::manufactured(ManufacturedSolution::sine()), cfg);
      FAIL("expected NewtonError");
    } catch (const NewtonError& e) {
      CHECK_FALSE(e.partial().report.converged);
      CHECK(e.partial().report.iterations == 1);
      CHECK(e.partial().u.size() == static_cast<Eigen::Index>(disc.num_dofs()));
    }
  }

  TEST_CASE("config validation") {
    NewtonConfig c;
    CHECK_NOTHROW(c.validate());
    c.rel_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = NewtonConfig{};
    c.cg_tol = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = NewtonConfig{};
    c.max_iterations = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    DiscretizationOptions bad;
    bad.quadrature_degree = 9;
    CHECK_THROWS_AS(Discretization(generate_cube_mesh(1), PhysicsConfig{}, bad), ConfigError);
  }

  TEST_CASE("non-homogeneous boundary data reproduces linear fields") {
    const Vec3 g(0.4, -1.1, 0.7);
    const double c0 = 0.25;
    const auto exact = ManufacturedSolution::linear(c0, g);
    const Discretization disc(generate_voronoi_mesh(64, 9), linear_physics(1.0));
    NewtonConfig cfg;
    cfg.cg_tol = 1e-14;
    cfg.rel_tol = 1e-12;
    const auto res = newton_solve(disc, LoadSpec::manufactured(exact), cfg, exact.value);
    double worst = 0.0;
    for (std::size_t v = 0; v < disc.num_dofs(); ++v)
      worst = std::max(worst, std::abs(res.u[static_cast<Eigen::Index>(v)] - exact.value(disc.mesh().vertex(v))));
    CHECK(worst <= 1e-10);
  }
}
