#include "vemlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace vemlab {

double QuadratureRule::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

GaussRule1D gauss_legendre(int num_points) {
  if (num_points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  const int n = num_points;
  GaussRule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

namespace {

int points_for(int exactness) { return std::max(1, (exactness + 2) / 2); }

}  // namespace

QuadratureRule edge_quadrature(const Point& a, const Point& b, int exactness) {
  const GaussRule1D g = gauss_legendre(points_for(exactness));
  const double half = 0.5 * (b - a).norm();
  QuadratureRule rule;
  rule.points.reserve(g.nodes.size());
  rule.weights.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    rule.points.push_back(0.5 * (a + b) + 0.5 * g.nodes[i] * (b - a));
    rule.weights.push_back(half * g.weights[i]);
  }
  return rule;
}

QuadratureRule triangle_quadrature(const Point& a, const Point& b, const Point& c, int exactness) {
  // Duffy collapse (s, t) -> (s, (1 - s) t); the Jacobian (1 - s) raises the
  // degree in s by one.
  const GaussRule1D gs = gauss_legendre(points_for(exactness + 1));
  const GaussRule1D gt = gauss_legendre(points_for(exactness));
  const Point ab = b - a;
  const Point ac = c - a;
  const double twice_area = ab.x() * ac.y() - ab.y() * ac.x();
  if (!(twice_area > 0.0)) throw std::invalid_argument("triangle_quadrature: degenerate or clockwise triangle");
  QuadratureRule rule;
  rule.points.reserve(gs.nodes.size() * gt.nodes.size());
  rule.weights.reserve(gs.nodes.size() * gt.nodes.size());
  for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
    const double s = 0.5 * (1.0 + gs.nodes[i]);
    for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
      const double t = 0.5 * (1.0 + gt.nodes[j]);
      const double y = (1.0 - s) * t;
      rule.points.push_back(a + s * ab + y * ac);
      rule.weights.push_back(twice_area * 0.25 * gs.weights[i] * gt.weights[j] * (1.0 - s));
    }
  }
  return rule;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
}

std::vector<std::array<Point, 3>> ear_clip(const std::vector<Point>& ring, double scale) {
  std::vector<std::size_t> idx(ring.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<Point, 3>> tris;
  const double tol = 1e-14 * scale * scale;
  while (idx.size() > 3) {
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t k = 0; k < m && !clipped; ++k) {
      const Point& p = ring[idx[(k + m - 1) % m]];
      const Point& q = ring[idx[k]];
      const Point& r = ring[idx[(k + 1) % m]];
      if (cross(p, q, r) <= tol) continue;
      bool empty = true;
      for (std::size_t j = 0; j < m && empty; ++j) {
        if (j == k || j == (k + 1) % m || j == (k + m - 1) % m) continue;
        const Point& x = ring[idx[j]];
        empty = !(cross(p, q, x) >= -tol && cross(q, r, x) >= -tol && cross(r, p, x) >= -tol);
      }
      if (!empty) continue;
      tris.push_back({p, q, r});
      idx.erase(idx.begin() + static_cast<long>(k));
      clipped = true;
    }
    if (!clipped) throw std::runtime_error("triangulate: ear clipping failed (self-intersecting polygon?)");
  }
  tris.push_back({ring[idx[0]], ring[idx[1]], ring[idx[2]]});
  return tris;
}

}  // namespace

std::vector<std::array<Point, 3>> triangulate(const ElementGeometry& geom) {
  const auto& v = geom.vertices;
  const std::size_t n = v.size();
  const double tol = 1e-12 * geom.diameter * geom.diameter;
  bool fan_ok = true;
  for (std::size_t i = 0; i < n && fan_ok; ++i) fan_ok = cross(geom.centroid, v[i], v[(i + 1) % n]) > tol;
  if (fan_ok) {
    std::vector<std::array<Point, 3>> tris;
    tris.reserve(n);
    for (std::size_t i = 0; i < n; ++i) tris.push_back({geom.centroid, v[i], v[(i + 1) % n]});
    return tris;
  }
  return ear_clip(v, geom.diameter);
}

QuadratureRule polygon_quadrature(const ElementGeometry& geom, int exactness) {
  QuadratureRule rule;
  for (const auto& t : triangulate(geom)) {
    QuadratureRule tr = triangle_quadrature(t[0], t[1], t[2], exactness);
    rule.points.insert(rule.points.end(), tr.points.begin(), tr.points.end());
    rule.weights.insert(rule.weights.end(), tr.weights.begin(), tr.weights.end());
  }
  return rule;
}

}  // namespace vemlab
