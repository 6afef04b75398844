#include "vempb/mesh_generators.hpp"

#include "vempb/error.hpp"
#include "vempb/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

namespace vempb {

namespace {

// Axis permutations of the Kuhn subdivision, in cell order within a cube.
constexpr std::array<std::array<int, 3>, 6> kKuhnPaths = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

void require_positive(int n, const char* what) {
  if (n < 1) throw MeshError(std::string(what) + " requires n >= 1");
}

std::vector<Vec3> grid_vertices(int n) {
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1));
  const double h = 1.0 / n;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) vertices.emplace_back(i * h, j * h, k * h);
  // Pin the outer layer exactly to the unit cube.
  for (auto& v : vertices)
    for (int d = 0; d < 3; ++d)
      if (v[d] > 1.0 - 0.5 * h) v[d] = 1.0;
  return vertices;
}

}  // namespace

PolyMesh generate_cube_mesh(int n) {
  require_positive(n, "generate_cube_mesh");
  auto vid = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };

  std::vector<std::vector<int>> faces;
  // Face ids by normal direction; each face is stored with normal along +axis.
  auto xface = [n](int i, int j, int k) { return i + (n + 1) * (j + n * k); };
  const int nx = (n + 1) * n * n;
  auto yface = [n, nx](int i, int j, int k) { return nx + i + n * (j + (n + 1) * k); };
  auto zface = [n, nx](int i, int j, int k) { return 2 * nx + i + n * (j + n * k); };
  faces.resize(3 * static_cast<std::size_t>(nx));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= n; ++i)
        faces[xface(i, j, k)] = {vid(i, j, k), vid(i, j + 1, k), vid(i, j + 1, k + 1), vid(i, j, k + 1)};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i < n; ++i)
        faces[yface(i, j, k)] = {vid(i, j, k), vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j, k)};
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        faces[zface(i, j, k)] = {vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k)};

  std::vector<std::vector<CellFace>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        cells.push_back({{xface(i, j, k), -1},
                         {xface(i + 1, j, k), 1},
                         {yface(i, j, k), -1},
                         {yface(i, j + 1, k), 1},
                         {zface(i, j, k), -1},
                         {zface(i, j, k + 1), 1}});

  return PolyMesh(grid_vertices(n), std::move(faces), std::move(cells));
}

PolyMesh mesh_from_tetrahedra(std::vector<Vec3> vertices, std::span<const std::array<int, 4>> tets) {
  std::map<std::array<int, 3>, int> face_ids;
  std::vector<std::vector<int>> faces;
  std::vector<std::vector<CellFace>> cells;
  cells.reserve(tets.size());
  for (const auto& t : tets) {
    const auto [a, b, c, d] = t;
    // Outward loops for a positively oriented tetrahedron.
    const std::array<std::array<int, 3>, 4> loops = {{{a, c, b}, {a, b, d}, {a, d, c}, {b, c, d}}};
    std::vector<CellFace> cell;
    for (const auto& loop : loops) {
      auto key = loop;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_ids.try_emplace(key, static_cast<int>(faces.size()));
      if (inserted) {
        faces.push_back({loop[0], loop[1], loop[2]});
        cell.push_back({it->second, 1});
      } else {
        cell.push_back({it->second, -1});
      }
    }
    cells.push_back(std::move(cell));
  }
  return PolyMesh(std::move(vertices), std::move(faces), std::move(cells));
}

PolyMesh generate_tet_mesh(int n) {
  require_positive(n, "generate_tet_mesh");
  auto vid = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };
  std::vector<std::array<int, 4>> tets;
  tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        for (const auto& path : kKuhnPaths) {
          std::array<int, 3> idx = {i, j, k};
          std::array<int, 4> tet{};
          tet[0] = vid(idx[0], idx[1], idx[2]);
          for (int s = 0; s < 3; ++s) {
            ++idx[path[s]];
            tet[s + 1] = vid(idx[0], idx[1], idx[2]);
          }
          // Odd permutations produce negatively oriented paths.
          const bool odd = (path[0] == 0 && path[1] == 2) || (path[0] == 1 && path[1] == 0) ||
                           (path[0] == 2 && path[1] == 1);
          if (odd) std::swap(tet[2], tet[3]);
          tets.push_back(tet);
        }
      }
  return mesh_from_tetrahedra(grid_vertices(n), tets);
}

std::vector<Vec3> voronoi_seeds(int n_seeds, std::uint64_t rng_seed) {
  if (n_seeds < 1) throw MeshError("voronoi mesh requires n_seeds >= 1");
  std::mt19937_64 rng(rng_seed);
  // 53-bit mantissa draw, independent of the standard library's distribution implementation.
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  std::vector<Vec3> seeds;
  seeds.reserve(n_seeds);
  for (int i = 0; i < n_seeds; ++i) {
    const double x = uniform();
    const double y = uniform();
    const double z = uniform();
    seeds.emplace_back(x, y, z);
  }
  return seeds;
}

PolyMesh generate_voronoi_mesh(int n_seeds, std::uint64_t rng_seed) {
  const auto seeds = voronoi_seeds(n_seeds, rng_seed);
  return generate_voronoi_mesh(seeds);
}

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "cubic") return MeshFamily::cubic;
  if (name == "tet") return MeshFamily::tet;
  if (name == "voronoi") return MeshFamily::voronoi;
  if (name == "file") return MeshFamily::file;
  throw ConfigError("unknown mesh family '" + name + "' (expected cubic, tet, voronoi or file)");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::cubic: return "cubic";
    case MeshFamily::tet: return "tet";
    case MeshFamily::voronoi: return "voronoi";
    case MeshFamily::file: return "file";
  }
  return "unknown";
}

PolyMesh make_mesh(const MeshSpec& spec) {
  switch (spec.family) {
    case MeshFamily::cubic: return generate_cube_mesh(spec.n);
    case MeshFamily::tet: return generate_tet_mesh(spec.n);
    case MeshFamily::voronoi: return generate_voronoi_mesh(spec.n_seeds, spec.rng_seed);
    case MeshFamily::file: return load_mesh(spec.path);
  }
  throw ConfigError("unsupported mesh family");
}

int locate_structured_cell(MeshFamily family, int n, const Vec3& x) {
  std::array<int, 3> idx{};
  Vec3 local;
  for (int d = 0; d < 3; ++d) {
    const double s = x[d] * n;
    idx[d] = std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
    local[d] = s - idx[d];
  }
  const int cube = idx[0] + n * (idx[1] + n * idx[2]);
  if (family == MeshFamily::cubic) return cube;
  if (family != MeshFamily::tet) throw MeshError("structured location needs a cubic or tet mesh");

  // The Kuhn tetrahedron along path p contains points with local[p0] >= local[p1] >= local[p2].
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return local[a] > local[b]; });
  const auto it = std::find(kKuhnPaths.begin(), kKuhnPaths.end(), order);
  return 6 * cube + static_cast<int>(it - kKuhnPaths.begin());
}

}  // namespace vempb
