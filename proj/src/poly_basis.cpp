#include "vemlab/poly_basis.hpp"

#include <cmath>

namespace vemlab {

ScaledMonomialBasis::ScaledMonomialBasis(const Point& centre, double scale, int degree)
    : centre_(centre), scale_(scale), degree_(degree) {
  for (int d = 0; d <= degree; ++d)
    for (int ey = 0; ey <= d; ++ey) exponents_.push_back({d - ey, ey});
}

namespace {

/// Powers 0..n of t.
Eigen::VectorXd powers(double t, int n) {
  Eigen::VectorXd p(n + 1);
  p(0) = 1.0;
  for (int i = 1; i <= n; ++i) p(i) = p(i - 1) * t;
  return p;
}

}  // namespace

Eigen::VectorXd ScaledMonomialBasis::values(const Point& x) const {
  const Point xi = (x - centre_) / scale_;
  const Eigen::VectorXd px = powers(xi.x(), degree_);
  const Eigen::VectorXd py = powers(xi.y(), degree_);
  Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = px(exponents_[i].x) * py(exponents_[i].y);
  return v;
}

Eigen::Matrix2Xd ScaledMonomialBasis::gradients(const Point& x) const {
  const Point xi = (x - centre_) / scale_;
  const Eigen::VectorXd px = powers(xi.x(), degree_);
  const Eigen::VectorXd py = powers(xi.y(), degree_);
  Eigen::Matrix2Xd g(2, static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    const auto col = static_cast<Eigen::Index>(i);
    g(0, col) = a > 0 ? a * px(a - 1) * py(b) / scale_ : 0.0;
    g(1, col) = b > 0 ? b * px(a) * py(b - 1) / scale_ : 0.0;
  }
  return g;
}

Eigen::MatrixXd ScaledMonomialBasis::derivative_x() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_pk(degree_ - 1)),
                                            static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    if (a > 0) d(static_cast<Eigen::Index>(index(a - 1, b)), static_cast<Eigen::Index>(i)) = a / scale_;
  }
  return d;
}

Eigen::MatrixXd ScaledMonomialBasis::derivative_y() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_pk(degree_ - 1)),
                                            static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    if (b > 0) d(static_cast<Eigen::Index>(index(a, b - 1)), static_cast<Eigen::Index>(i)) = b / scale_;
  }
  return d;
}

Eigen::MatrixXd ScaledMonomialBasis::laplacian() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_pk(degree_ - 2)),
                                            static_cast<Eigen::Index>(size()));
  const double h2 = scale_ * scale_;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    const auto col = static_cast<Eigen::Index>(i);
    if (a > 1) l(static_cast<Eigen::Index>(index(a - 2, b)), col) += a * (a - 1) / h2;
    if (b > 1) l(static_cast<Eigen::Index>(index(a, b - 2)), col) += b * (b - 1) / h2;
  }
  return l;
}

double poly_eval(const ScaledMonomialBasis& basis, const Eigen::VectorXd& coeffs, const Point& x) {
  return basis.values(x).dot(coeffs);
}

Point poly_grad(const ScaledMonomialBasis& basis, const Eigen::VectorXd& coeffs, const Point& x) {
  return basis.gradients(x) * coeffs;
}

Eigen::VectorXd EdgeBasis::values(double s) const { return powers(s, degree_); }

Eigen::MatrixXd mass_matrix(const ScaledMonomialBasis& basis, const QuadratureRule& rule, int up_to,
                            const ScalarField& weight) {
  const auto n = static_cast<Eigen::Index>(dim_pk(up_to));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd m = basis.values(rule.points[q]).head(n);
    const double w = rule.weights[q] * (weight ? weight(rule.points[q]) : 1.0);
    h.selfadjointView<Eigen::Lower>().rankUpdate(m, w);
  }
  h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
  return h;
}

Eigen::MatrixXd mass_matrix(const ElementGeometry& geom, const ScaledMonomialBasis& basis, int up_to,
                            const ScalarField& weight, int extra_degree) {
  return mass_matrix(basis, polygon_quadrature(geom, 2 * up_to + extra_degree), up_to, weight);
}

}  // namespace vemlab
