#pragma once

#include "vemlab/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vemlab {

enum class MeshFamily { square, concave, lloyd0, lloyd100 };

std::string_view to_string(MeshFamily family);
MeshFamily parse_family(std::string_view name);

/// Name of the pseudo-random algorithm behind the Voronoi seeds.
inline constexpr std::string_view kSeedGenerator = "mt19937_64";

struct GeneratorSpec {
  MeshFamily family = MeshFamily::square;
  /// Cell count. For square/concave this is the number of squares (n^2).
  std::size_t target_cells = 100;
  std::uint64_t seed = 1;
  /// Defaults to 0 for lloyd0 and 100 for lloyd100.
  std::optional<int> lloyd_iterations;
};

PolyMesh square_mesh(std::size_t n_per_side);

/// Each square is cut by a zigzag polyline into two congruent, non-convex,
/// star-shaped hexagons.
PolyMesh concave_mesh(std::size_t n_per_side);

/// Clipped Voronoi diagram of the given seeds restricted to the unit square.
PolyMesh voronoi_from_seeds(const std::vector<Point>& seeds);

/// `count` uniform seeds in (0,1)^2, deterministic in `seed`.
std::vector<Point> random_seeds(std::size_t count, std::uint64_t seed);

struct LloydResult {
  PolyMesh mesh;
  std::vector<Point> seeds;
  /// max_i |s_i - c_i| before each iteration's update.
  std::vector<double> movement;
};

LloydResult lloyd_relax(std::vector<Point> seeds, int iterations);

PolyMesh voronoi_mesh(const GeneratorSpec& spec);

/// Dispatches on the family.
PolyMesh generate_mesh(const GeneratorSpec& spec);

}  // namespace vemlab
