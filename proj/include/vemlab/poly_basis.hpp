#pragma once

#include "vemlab/mesh.hpp"
#include "vemlab/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace vemlab {

/// Dimension of P_k in two variables; 0 for k < 0.
constexpr std::size_t dim_pk(int k) {
  return k < 0 ? 0 : static_cast<std::size_t>((k + 1) * (k + 2) / 2);
}

struct Exponent {
  int x;
  int y;
  int degree() const { return x + y; }
};

using ScalarField = std::function<double(const Point&)>;

/// m_a(x) = ((x - x_E) / h_E)^a, ordered by total degree and, within a
/// degree, by decreasing power of x:  1, X, Y, X^2, XY, Y^2, ...
class ScaledMonomialBasis {
public:
  ScaledMonomialBasis(const Point& centre, double scale, int degree);
  ScaledMonomialBasis(const ElementGeometry& geom, int degree)
      : ScaledMonomialBasis(geom.centroid, geom.diameter, degree) {}

  int degree() const { return degree_; }
  std::size_t size() const { return exponents_.size(); }
  const Point& centre() const { return centre_; }
  double scale() const { return scale_; }
  const std::vector<Exponent>& exponents() const { return exponents_; }

  static std::size_t index(int ex, int ey) {
    const int d = ex + ey;
    return dim_pk(d - 1) + static_cast<std::size_t>(ey);
  }

  Eigen::VectorXd values(const Point& x) const;
  /// Row 0 holds d/dx, row 1 d/dy, including the 1/h chain-rule factor.
  Eigen::Matrix2Xd gradients(const Point& x) const;

  /// Coefficient map of d/dx (resp. d/dy): P_k -> P_{k-1}, size n_{k-1} x n_k.
  Eigen::MatrixXd derivative_x() const;
  Eigen::MatrixXd derivative_y() const;
  /// Coefficient map of the Laplacian: P_k -> P_{k-2}.
  Eigen::MatrixXd laplacian() const;

private:
  Point centre_;
  double scale_;
  int degree_;
  std::vector<Exponent> exponents_;
};

double poly_eval(const ScaledMonomialBasis& basis, const Eigen::VectorXd& coeffs, const Point& x);
Point poly_grad(const ScaledMonomialBasis& basis, const Eigen::VectorXd& coeffs, const Point& x);

/// Monomials of the scaled arclength s in [-1, 1] on an edge, with s running
/// from `from` to `to`.
class EdgeBasis {
public:
  EdgeBasis(const Point& from, const Point& to, int degree) : from_(from), to_(to), degree_(degree) {}
  int degree() const { return degree_; }
  std::size_t size() const { return static_cast<std::size_t>(degree_ + 1); }
  double coordinate(const Point& x) const {
    const Point d = to_ - from_;
    return 2.0 * (x - from_).dot(d) / d.squaredNorm() - 1.0;
  }
  Eigen::VectorXd values(double s) const;
  Eigen::VectorXd values(const Point& x) const { return values(coordinate(x)); }

private:
  Point from_;
  Point to_;
  int degree_;
};

/// H_ab = int_E w m_a m_b for |a|, |b| <= up_to, using the supplied rule.
/// An empty weight means w = 1. The result is exactly symmetric.
Eigen::MatrixXd mass_matrix(const ScaledMonomialBasis& basis, const QuadratureRule& rule, int up_to,
                            const ScalarField& weight = {});

/// Same, building a polygon rule of exactness 2 * up_to + extra_degree.
Eigen::MatrixXd mass_matrix(const ElementGeometry& geom, const ScaledMonomialBasis& basis, int up_to,
                            const ScalarField& weight = {}, int extra_degree = 0);

}  // namespace vemlab
