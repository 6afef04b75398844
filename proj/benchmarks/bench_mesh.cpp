#include <vempb/mesh_generators.hpp>
#include <vempb/projectors.hpp>

#include <benchmark/benchmark.h>

namespace {

void BM_VoronoiGeneration(benchmark::State& state) {
  const int seeds = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vempb::generate_voronoi_mesh(seeds, 1));
  state.SetItemsProcessed(state.iterations() * seeds);
}
BENCHMARK(BM_VoronoiGeneration)->Arg(64)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_CubeGeneration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vempb::generate_cube_mesh(n));
}
BENCHMARK(BM_CubeGeneration)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Per-cell projector construction; Voronoi cells have 15-20 vertices on average.
void BM_CellProjectors(benchmark::State& state) {
  const auto mesh = state.range(0) == 0 ? vempb::generate_cube_mesh(8) : vempb::generate_voronoi_mesh(512, 1);
  std::size_t c = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vempb::cell_projectors(mesh, c));
    c = (c + 1) % mesh.num_cells();
  }
  state.SetLabel(state.range(0) == 0 ? "hexahedra" : "voronoi");
}
BENCHMARK(BM_CellProjectors)->Arg(0)->Arg(1);

}  // namespace
