#include "oracles.hpp"

#include <vempb/error.hpp>
#include <vempb/mesh_generators.hpp>
#include <vempb/projectors.hpp>
#include <vempb/quadrature.hpp>

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace vempb;
using vempb::testing::Rng;

namespace {

struct Linear {
  double c;
  Vec3 g;
  double operator()(const Vec3& x) const { return c + g.dot(x); }
};

Linear random_linear(Rng& rng) {
  return {vempb::testing::uniform(rng, -2, 2), vempb::testing::random_point(rng, -2, 2)};
}

Eigen::VectorXd sample(const PolyMesh& mesh, const std::vector<int>& ids, const std::function<double(const Vec3&)>& f) {
  Eigen::VectorXd v(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(mesh.vertex(ids[i]));
  return v;
}

// Over 100 cells drawn from all three generators.
std::vector<PolyMesh> reproduction_meshes() {
  std::vector<PolyMesh> m;
  m.push_back(generate_cube_mesh(3));
  m.push_back(generate_tet_mesh(2));
  m.push_back(generate_voronoi_mesh(64, 8));
  return m;
}

}  // namespace

TEST_SUITE("projectors") {
  TEST_CASE("face projector reproduces constants and in-plane coordinates") {
    const PolyMesh mesh = generate_voronoi_mesh(16, 3);
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      const auto& ids = mesh.face(f).vertices;
      const FaceProjector p = face_pi_nabla(mesh, f);
      const Eigen::VectorXd ones = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(ids.size()), 4.5);
      const Eigen::VectorXd c = p.apply(ones);
      CHECK(std::abs(c[0] - 4.5) < 1e-12);
      CHECK(c.tail(2).norm() < 1e-12);

      const Eigen::VectorXd xi = sample(mesh, ids, [&](const Vec3& x) { return p.frame.to_local(x).x(); });
      for (int v : ids) CHECK(std::abs(p.eval(xi, mesh.vertex(v)) - p.frame.to_local(mesh.vertex(v)).x()) < 1e-12);
      CHECK(std::abs(p.eval(xi, mesh.face(f).centroid)) < 1e-12);
    }
  }

  TEST_CASE("face projector matches a least-squares fit") {
    const PolyMesh mesh = generate_voronoi_mesh(40, 19);
    Rng rng(11);
    int pentagons = 0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      const auto& ids = mesh.face(f).vertices;
      if (ids.size() != 5) continue;
      ++pentagons;
      const Linear field = random_linear(rng);
      const FaceProjector p = face_pi_nabla(mesh, f);
      const double h = mesh.face(f).diameter;
      Eigen::MatrixXd a(5, 3);
      Eigen::VectorXd b(5);
      for (int i = 0; i < 5; ++i) {
        const Vec2 xi = p.frame.to_local(mesh.vertex(ids[i]));
        a.row(i) << 1.0, xi.x() / h, xi.y() / h;
        b[i] = field(mesh.vertex(ids[i]));
      }
      const Eigen::VectorXd fit = a.colPivHouseholderQr().solve(b);
      const Eigen::VectorXd coeff = p.apply(b);
      CHECK((coeff - fit).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, fit.cwiseAbs().maxCoeff()));
    }
    CHECK(pentagons > 10);
  }

  TEST_CASE("face integrals") {
    const PolyMesh tet = generate_tet_mesh(1);
    Rng rng(5);
    for (std::size_t f = 0; f < tet.num_faces(); ++f) {
      const auto& ids = tet.face(f).vertices;
      const FaceProjector p = face_pi_nabla(tet, f);
      const Eigen::VectorXd one = Eigen::VectorXd::Ones(3);
      CHECK(std::abs(face_integral(p, one) - tet.face(f).area) < 1e-15);
      const Eigen::VectorXd v = sample(tet, ids, random_linear(rng));
      CHECK(std::abs(face_integral(p, v) - tet.face(f).area * v.mean()) < 1e-14);
    }

    const PolyMesh vor = generate_voronoi_mesh(30, 12);
    int quads = 0;
    for (std::size_t f = 0; f < vor.num_faces(); ++f) {
      const auto& ids = vor.face(f).vertices;
      const Linear field = random_linear(rng);
      const FaceProjector p = face_pi_nabla(vor, f);
      const Eigen::VectorXd v = sample(vor, ids, field);
      const double quad = integrate(face_quadrature(vor, f, 2), field);
      CHECK(std::abs(face_integral(p, v) - quad) <= 1e-12);
      quads += ids.size() == 4;
    }
    CHECK(quads > 0);
  }

  TEST_CASE("enhancement: integral equals the integral of the projection") {
    const PolyMesh mesh = generate_voronoi_mesh(20, 30);
    Rng rng(9);
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      const FaceProjector p = face_pi_nabla(mesh, f);
      Eigen::VectorXd v(static_cast<Eigen::Index>(mesh.face(f).vertices.size()));
      for (auto& x : v) x = vempb::testing::uniform(rng, -1, 1);
      const double q = integrate(face_quadrature(mesh, f, 2), [&](const Vec3& x) { return p.eval(v, x); });
      CHECK(std::abs(face_integral(p, v) - q) <= 1e-13);
    }
  }

  TEST_CASE("cell projectors on constants and coordinates") {
    for (const auto& mesh : vempb::testing::sample_meshes()) {
      for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const CellProjectors p = cell_projectors(mesh, c);
        const auto n = static_cast<Eigen::Index>(p.num_dofs());
        const Eigen::VectorXd constant = Eigen::VectorXd::Constant(n, -1.25);
        const Eigen::VectorXd pc = p.apply(constant);
        CHECK(std::abs(pc[0] + 1.25) < 1e-12);
        CHECK(pc.tail(3).norm() < 1e-12);
        CHECK((p.grad * constant).norm() < 1e-12);

        const Eigen::VectorXd x = sample(mesh, p.vertices, [](const Vec3& y) { return y.x(); });
        CHECK(((p.grad * x) - Vec3(1, 0, 0)).norm() < 1e-12);
        const Eigen::VectorXd px = p.apply(x);
        for (int v : p.vertices) CHECK(std::abs(p.eval(px, mesh.vertex(v)) - mesh.vertex(v).x()) < 1e-12);
        CHECK(&p.pi0() == &p.pi_nabla);
      }
    }
  }

  TEST_CASE("polynomial reproduction on random linear fields") {
    Rng rng(1234);
    std::size_t cells = 0;
    for (const auto& mesh : reproduction_meshes()) {
      for (std::size_t c = 0; c < mesh.num_cells(); ++c, ++cells) {
        const CellProjectors p = cell_projectors(mesh, c);
        const Linear field = random_linear(rng);
        const Eigen::VectorXd v = sample(mesh, p.vertices, field);
        const Eigen::VectorXd coeff = p.apply(v);
        // Change of basis: c + g.x = (c + g.x_E) + (h_E g) . (x - x_E) / h_E.
        Eigen::Vector4d expected;
        expected << field(p.basis.center()), p.diameter * field.g;
        CHECK((coeff - expected).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
        CHECK(((p.grad * v) - field.g).norm() <= 1e-12 * std::max(1.0, field.g.norm()));
      }
    }
    CHECK(cells >= 100);
  }

  TEST_CASE("gradient projection is the gradient of the elliptic projection") {
    Rng rng(4);
    const PolyMesh mesh = generate_voronoi_mesh(32, 2);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const CellProjectors p = cell_projectors(mesh, c);
      Eigen::VectorXd v(static_cast<Eigen::Index>(p.num_dofs()));
      for (auto& x : v) x = vempb::testing::uniform(rng, -1, 1);
      const Eigen::Vector4d coeff = p.apply(v);
      CHECK((coeff.tail<3>() / p.diameter - p.grad * v).norm() < 1e-12);
    }
  }

  TEST_CASE("orthogonality, mean constraint and idempotence") {
    Rng rng(8);
    for (const auto& mesh : vempb::testing::sample_meshes()) {
      for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const Cell& cell = mesh.cell(c);
        const CellProjectors p = cell_projectors(mesh, c);
        Eigen::VectorXd v(static_cast<Eigen::Index>(p.num_dofs()));
        for (auto& x : v) x = vempb::testing::uniform(rng, -1, 1);
        const Eigen::VectorXd coeff = p.apply(v);

        // Boundary data of v realized face by face through quadrature of the face projections.
        Vec3 flux = Vec3::Zero();
        double boundary_v = 0.0;
        double boundary_pi = 0.0;
        for (const auto& cf : cell.faces) {
          const Face& f = mesh.face(cf.face);
          const FaceProjector fp = face_pi_nabla(mesh, cf.face);
          Eigen::VectorXd fv(static_cast<Eigen::Index>(f.vertices.size()));
          for (std::size_t i = 0; i < f.vertices.size(); ++i) {
            const auto it = std::find(p.vertices.begin(), p.vertices.end(), f.vertices[i]);
            fv[static_cast<Eigen::Index>(i)] = v[it - p.vertices.begin()];
          }
          const auto rule = face_quadrature(mesh, cf.face, 2);
          const double iv = integrate(rule, [&](const Vec3& x) { return fp.eval(fv, x); });
          flux += cf.sign * f.normal * iv;
          boundary_v += iv;
          boundary_pi += integrate(rule, [&](const Vec3& x) { return p.eval(coeff, x); });
        }
        // (grad Pi v - grad v, grad p)_E = |E| a.(grad Pi v) - int_{dE} v a.n for every a.
        CHECK((cell.volume * coeff.tail<3>() / p.diameter - flux).norm() <= 1e-12);
        CHECK(std::abs(boundary_v - boundary_pi) <= 1e-12);

        const Eigen::VectorXd again = p.apply(p.dof_matrix * coeff);
        CHECK((again - coeff).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((p.pi_nabla * p.dof_matrix - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }

  TEST_CASE("gather and degree checks") {
    const PolyMesh mesh = generate_cube_mesh(2);
    const CellProjectors p = cell_projectors(mesh, 3);
    Eigen::VectorXd global(static_cast<Eigen::Index>(mesh.num_vertices()));
    for (Eigen::Index i = 0; i < global.size(); ++i) global[i] = static_cast<double>(i);
    const Eigen::VectorXd local = p.gather(global);
    for (std::size_t i = 0; i < p.vertices.size(); ++i) CHECK(local[static_cast<Eigen::Index>(i)] == p.vertices[i]);
    CHECK(p.face_integrals.rows() == 6);
    CHECK_THROWS_AS(cell_projectors(mesh, 0, 2), Error);
    CHECK_THROWS_AS(face_pi_nabla(mesh, 0, 0), Error);
  }
}
