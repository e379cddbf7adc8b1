#include "vemlab/mesh_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace vemlab {

std::string_view to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::square: return "square";
    case MeshFamily::concave: return "concave";
    case MeshFamily::lloyd0: return "lloyd0";
    case MeshFamily::lloyd100: return "lloyd100";
  }
  return "unknown";
}

MeshFamily parse_family(std::string_view name) {
  if (name == "square") return MeshFamily::square;
  if (name == "concave") return MeshFamily::concave;
  if (name == "lloyd0" || name == "Lloyd-0") return MeshFamily::lloyd0;
  if (name == "lloyd100" || name == "Lloyd-100") return MeshFamily::lloyd100;
  throw std::invalid_argument("unknown mesh family '" + std::string(name) + "'");
}

PolyMesh square_mesh(std::size_t n) {
  if (n == 0) throw std::invalid_argument("square_mesh: n_per_side must be >= 1");
  PolyMesh mesh;
  const double a = 1.0 / static_cast<double>(n);
  auto corner = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(i == n ? 1.0 : i * a, j == n ? 1.0 : j * a);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      mesh.cells.push_back({corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)});
  mesh.finalize();
  return mesh;
}

PolyMesh concave_mesh(std::size_t n) {
  if (n == 0) throw std::invalid_argument("concave_mesh: n_per_side must be >= 1");
  PolyMesh mesh;
  const double a = 1.0 / static_cast<double>(n);
  auto coord = [n, a](std::size_t i, double frac) {
    return i == n && frac == 0.0 ? 1.0 : (static_cast<double>(i) + frac) * a;
  };
  // Corners, then mid-points of the vertical sides, then the two zigzag
  // knots of every square.
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i) mesh.vertices.emplace_back(coord(i, 0.0), coord(j, 0.0));
  const std::size_t mid_base = mesh.vertices.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= n; ++i) mesh.vertices.emplace_back(coord(i, 0.0), coord(j, 0.5));
  const std::size_t knot_base = mesh.vertices.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      mesh.vertices.emplace_back(coord(i, 1.0 / 3.0), coord(j, 0.25));
      mesh.vertices.emplace_back(coord(i, 2.0 / 3.0), coord(j, 0.75));
    }
  auto corner = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  auto mid = [n, mid_base](std::size_t i, std::size_t j) { return mid_base + j * (n + 1) + i; };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k1 = knot_base + 2 * (j * n + i);
      const std::size_t k2 = k1 + 1;
      mesh.cells.push_back({corner(i, j), corner(i + 1, j), mid(i + 1, j), k2, k1, mid(i, j)});
      mesh.cells.push_back({mid(i, j), k1, k2, mid(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)});
    }
  mesh.finalize();
  return mesh;
}

std::vector<Point> random_seeds(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto unit = [&gen] {
    // 53 random bits mapped to (0,1); zero is rejected.
    double u = 0.0;
    while (u == 0.0) u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return u;
  };
  std::vector<Point> seeds(count);
  for (auto& s : seeds) {
    const double x = unit();
    const double y = unit();
    s = Point(x, y);
  }
  return seeds;
}

namespace {

using Ring = std::vector<Point>;

/// Keeps the part of a convex polygon with (x - m) . d <= 0.
Ring clip(const Ring& poly, const Point& m, const Point& d) {
  Ring out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double fp = (p - m).dot(d);
    const double fq = (q - m).dot(d);
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (fp / (fp - fq)) * (q - p));
  }
  return out;
}

/// Seeds bucketed on a uniform grid to prune far-away bisectors.
class SeedGrid {
public:
  explicit SeedGrid(const std::vector<Point>& seeds) : seeds_(seeds) {
    side_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(seeds.size()))));
    buckets_.resize(side_ * side_);
    for (std::size_t i = 0; i < seeds.size(); ++i) buckets_[bucket_of(seeds[i])].push_back(i);
  }

  Ring cell(std::size_t i) const {
    const Point s = seeds_[i];
    Ring poly{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    const auto [bx, by] = coords(s);
    const double width = 1.0 / static_cast<double>(side_);
    const long side = static_cast<long>(side_);
    for (long r = 0; r < side; ++r) {
      if (r >= 2) {
        double radius = 0.0;
        for (const auto& p : poly) radius = std::max(radius, (p - s).norm());
        if (static_cast<double>(r - 1) * width > 2.0 * radius) break;
      }
      for (long j = by - r; j <= by + r; ++j)
        for (long k = bx - r; k <= bx + r; ++k) {
          if (std::max(std::abs(j - by), std::abs(k - bx)) != r) continue;
          if (j < 0 || k < 0 || j >= side || k >= side) continue;
          for (std::size_t other : buckets_[static_cast<std::size_t>(j * side + k)]) {
            if (other == i) continue;
            const Point t = seeds_[other];
            poly = clip(poly, 0.5 * (s + t), t - s);
          }
        }
    }
    return poly;
  }

private:
  std::pair<long, long> coords(const Point& p) const {
    const long side = static_cast<long>(side_);
    auto idx = [side](double v) { return std::clamp(static_cast<long>(v * static_cast<double>(side)), 0L, side - 1); };
    return {idx(p.x()), idx(p.y())};
  }
  std::size_t bucket_of(const Point& p) const {
    const auto [x, y] = coords(p);
    return static_cast<std::size_t>(y) * side_ + static_cast<std::size_t>(x);
  }

  const std::vector<Point>& seeds_;
  std::size_t side_;
  std::vector<std::vector<std::size_t>> buckets_;
};

std::vector<Ring> clipped_cells(const std::vector<Point>& seeds) {
  SeedGrid grid(seeds);
  std::vector<Ring> cells(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) cells[i] = grid.cell(i);
  return cells;
}

Point ring_centroid(const Ring& ring) { return polygon_geometry(ring).centroid; }

bool has_near_duplicates(std::vector<Point> seeds) {
  std::sort(seeds.begin(), seeds.end(), [](const Point& l, const Point& r) {
    return l.x() < r.x() || (l.x() == r.x() && l.y() < r.y());
  });
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size() && seeds[j].x() - seeds[i].x() < 1e-10; ++j)
      if ((seeds[j] - seeds[i]).norm() < 1e-10) return true;
  return false;
}

constexpr double kMergeTol = 1e-10;

}  // namespace

PolyMesh voronoi_from_seeds(const std::vector<Point>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("voronoi: at least one seed required");
  if (has_near_duplicates(seeds)) throw MeshError("voronoi: duplicate seed points");
  const std::vector<Ring> rings = clipped_cells(seeds);

  // Merge vertices closer than kMergeTol; the first occurrence wins.
  PolyMesh mesh;
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> buckets;
  auto key = [](const Point& p) {
    return std::make_pair(static_cast<long long>(std::floor(p.x() / kMergeTol)),
                          static_cast<long long>(std::floor(p.y() / kMergeTol)));
  };
  auto lookup = [&](const Point& p) -> std::size_t {
    const auto [kx, ky] = key(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find({kx + dx, ky + dy});
        if (it == buckets.end()) continue;
        for (std::size_t v : it->second)
          if ((mesh.vertices[v] - p).norm() < kMergeTol) return v;
      }
    mesh.vertices.push_back(p);
    buckets[{kx, ky}].push_back(mesh.vertices.size() - 1);
    return mesh.vertices.size() - 1;
  };

  for (std::size_t c = 0; c < rings.size(); ++c) {
    std::vector<std::size_t> ring;
    for (const auto& p : rings[c]) {
      const std::size_t v = lookup(p);
      if (ring.empty() || ring.back() != v) ring.push_back(v);
    }
    while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
    if (ring.size() < 3) throw MeshError("voronoi: cell " + std::to_string(c) + " collapsed", static_cast<long>(c));
    mesh.cells.push_back(std::move(ring));
  }
  mesh.finalize();

  // Every single-cell edge must sit on the square boundary; anything else is
  // a hanging node left by inconsistent clipping.
  for (const auto& be : mesh.boundary_edges) {
    const auto& ring = mesh.cells[be.cell];
    const Point& p = mesh.vertices[ring[be.local_edge]];
    const Point& q = mesh.vertices[ring[(be.local_edge + 1) % ring.size()]];
    auto on_side = [](double u, double v) { return (u == 0.0 && v == 0.0) || (u == 1.0 && v == 1.0); };
    if (!on_side(p.x(), q.x()) && !on_side(p.y(), q.y()))
      throw MeshError("voronoi: non-conforming interior edge in cell " + std::to_string(be.cell),
                      static_cast<long>(be.cell));
  }
  return mesh;
}

LloydResult lloyd_relax(std::vector<Point> seeds, int iterations) {
  if (iterations < 0) throw std::invalid_argument("lloyd_relax: iterations must be >= 0");
  LloydResult result;
  for (int it = 0; it < iterations; ++it) {
    const std::vector<Ring> cells = clipped_cells(seeds);
    double move = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Point c = ring_centroid(cells[i]);
      move = std::max(move, (c - seeds[i]).norm());
      seeds[i] = c;
    }
    result.movement.push_back(move);
  }
  result.mesh = voronoi_from_seeds(seeds);
  result.seeds = std::move(seeds);
  return result;
}

PolyMesh voronoi_mesh(const GeneratorSpec& spec) {
  if (spec.target_cells == 0) throw std::invalid_argument("voronoi_mesh: target_cells must be >= 1");
  const int iterations =
      spec.lloyd_iterations.value_or(spec.family == MeshFamily::lloyd100 ? 100 : 0);
  constexpr int kRetries = 10;
  for (int attempt = 0; attempt <= kRetries; ++attempt) {
    const auto seeds = random_seeds(spec.target_cells, spec.seed + static_cast<std::uint64_t>(attempt));
    if (has_near_duplicates(seeds)) continue;
    return lloyd_relax(seeds, iterations).mesh;
  }
  throw MeshError("voronoi_mesh: duplicate seeds after " + std::to_string(kRetries) + " retries");
}

PolyMesh generate_mesh(const GeneratorSpec& spec) {
  auto side = [&spec] {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.target_cells))));
    if (n * n != spec.target_cells)
      throw std::invalid_argument("square/concave families need a perfect-square cell count, got " +
                                  std::to_string(spec.target_cells));
    return n;
  };
  switch (spec.family) {
    case MeshFamily::square: return square_mesh(side());
    case MeshFamily::concave: return concave_mesh(side());
    case MeshFamily::lloyd0:
    case MeshFamily::lloyd100: return voronoi_mesh(spec);
  }
  throw std::logic_error("unreachable");
}

}  // namespace vemlab
