#pragma once

#include "vempb/mesh.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vempb {

/// n^3 axis-aligned cubes tiling [0,1]^3. Throws MeshError for n < 1.
PolyMesh generate_cube_mesh(int n);

/// Each cube of the n^3 grid split into 6 tetrahedra along its main diagonal
/// (Kuhn subdivision, conforming across cubes). Throws MeshError for n < 1.
PolyMesh generate_tet_mesh(int n);

/// Tetrahedral mesh from positively oriented vertex quadruples; shared triangles
/// are detected by their vertex sets.
PolyMesh mesh_from_tetrahedra(std::vector<Vec3> vertices, std::span<const std::array<int, 4>> tets);

/// Deterministic uniform seeds in the open unit cube.
std::vector<Vec3> voronoi_seeds(int n_seeds, std::uint64_t rng_seed);

/// Voronoi tessellation of [0,1]^3 restricted to the cube, built by clipping the cube
/// against the bisector half-spaces of neighbouring seeds. Vertices closer than
/// `merge_tol` are merged. Throws MeshError naming the seed if a cell degenerates.
PolyMesh generate_voronoi_mesh(std::span<const Vec3> seeds, double merge_tol = 1e-9);
PolyMesh generate_voronoi_mesh(int n_seeds, std::uint64_t rng_seed);

enum class MeshFamily { cubic, tet, voronoi, file };

MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);

/// Declarative description of a mesh, as used by configs and studies.
struct MeshSpec {
  MeshFamily family = MeshFamily::cubic;
  int n = 4;
  int n_seeds = 64;
  std::uint64_t rng_seed = 1;
  std::string path;
};

PolyMesh make_mesh(const MeshSpec& spec);

/// Index of the cell of a structured (cubic or tet) mesh with `n` cubes per axis that
/// contains x, following the generators' cell ordering.
int locate_structured_cell(MeshFamily family, int n, const Vec3& x);

}  // namespace vempb
