#include <vempb/discretization.hpp>
#include <vempb/mesh_generators.hpp>
#include <vempb/newton.hpp>
#include <vempb/sparse.hpp>

#include <benchmark/benchmark.h>

namespace {

void BM_Cg(benchmark::State& state) {
  const vempb::Discretization disc(vempb::generate_cube_mesh(static_cast<int>(state.range(0))),
                                   vempb::PhysicsConfig{});
  vempb::SparseSystem system{disc.stiffness(), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(disc.num_dofs())),
                             disc.dirichlet_mask()};
  vempb::apply_dirichlet(system);
  std::size_t iterations = 0;
  for (auto _ : state) {
    const auto r = vempb::cg_solve(system.matrix, system.rhs);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.x);
  }
  state.counters["cg_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_Cg)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_NewtonManufactured(benchmark::State& state) {
  const vempb::Discretization disc(vempb::generate_cube_mesh(static_cast<int>(state.range(0))),
                                   vempb::PhysicsConfig{});
  const auto load = vempb::LoadSpec::manufactured(vempb::ManufacturedSolution::sine());
  for (auto _ : state) benchmark::DoNotOptimize(vempb::newton_solve(disc, load).u);
}
BENCHMARK(BM_NewtonManufactured)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
