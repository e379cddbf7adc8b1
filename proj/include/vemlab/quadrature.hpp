#pragma once

#include "vemlab/mesh.hpp"

#include <vector>

namespace vemlab {

struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double total_weight() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule1D gauss_legendre(int num_points);

/// Gauss-Legendre rule mapped to the segment [a, b]; exact for polynomials
/// of degree `exactness` in arclength. Weights sum to |b - a|.
QuadratureRule edge_quadrature(const Point& a, const Point& b, int exactness);

/// Collapsed (conical product) rule on a triangle, exact for degree
/// `exactness`. Requires counter-clockwise, non-degenerate input.
QuadratureRule triangle_quadrature(const Point& a, const Point& b, const Point& c, int exactness);

/// Splits the polygon into triangles: a fan from the centroid when every fan
/// triangle has positive area, ear clipping otherwise.
std::vector<std::array<Point, 3>> triangulate(const ElementGeometry& geom);

QuadratureRule polygon_quadrature(const ElementGeometry& geom, int exactness);

}  // namespace vemlab
