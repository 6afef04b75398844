#include <vempb/discretization.hpp>
#include <vempb/mesh_generators.hpp>

#include <benchmark/benchmark.h>

namespace {

vempb::PolyMesh bench_mesh(int which) {
  return which == 0 ? vempb::generate_cube_mesh(16) : vempb::generate_voronoi_mesh(4096, 1);
}

void BM_Setup(benchmark::State& state) {
  const auto mesh = bench_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vempb::Discretization(mesh, vempb::PhysicsConfig{}));
  state.SetLabel(state.range(0) == 0 ? "cube 16" : "voronoi 4096");
}
BENCHMARK(BM_Setup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Residual(benchmark::State& state) {
  const vempb::Discretization disc(bench_mesh(static_cast<int>(state.range(0))), vempb::PhysicsConfig{});
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(disc.num_dofs()), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(disc.nonlinear_residual(u));
}
BENCHMARK(BM_Residual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& state) {
  const vempb::Discretization disc(bench_mesh(static_cast<int>(state.range(0))), vempb::PhysicsConfig{});
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(disc.num_dofs()), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(disc.jacobian(u));
}
BENCHMARK(BM_Jacobian)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
