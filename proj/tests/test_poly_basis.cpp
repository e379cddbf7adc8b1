#include "oracles.hpp"
#include "vemlab/poly_basis.hpp"
#include "vemlab/quadrature.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace vemlab;
using vemlab::testing::edge_monomial;
using vemlab::testing::polygon_monomial;
using vemlab::testing::sample_polygons;

TEST_CASE("Gauss-Legendre basics") {
  for (int n = 1; n <= 12; ++n) {
    const GaussRule1D g = gauss_legendre(n);
    double s = 0.0;
    for (double w : g.weights) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for x^{2n-2}: int_{-1}^{1} = 2 / (2n - 1).
    double m = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) m += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
    CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("polygon quadrature matches the Green's theorem oracle up to degree 8") {
  const auto polys = sample_polygons(40, 3);
  for (const auto& ring : polys) {
    const ElementGeometry g = polygon_geometry(ring);
    for (int d = 0; d <= 8; ++d) {
      const QuadratureRule rule = polygon_quadrature(g, d);
      for (int a = 0; a <= d; ++a) {
        const int b = d - a;
        double q = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
          const Point z = (rule.points[i] - g.centroid) / g.diameter;
          q += rule.weights[i] * std::pow(z.x(), a) * std::pow(z.y(), b);
        }
        const double ref = polygon_monomial(ring, g.centroid, g.diameter, a, b);
        CHECK(std::abs(q - ref) <= 1e-12 * g.area);
      }
    }
  }
}

TEST_CASE("polygon quadrature on the unit square") {
  const ElementGeometry g = element_geometry(square_mesh(1), 0);
  const QuadratureRule rule = polygon_quadrature(g, 4);
  CHECK(rule.total_weight() == doctest::Approx(1.0).epsilon(1e-15));
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * rule.points[i].x() * rule.points[i].x() * rule.points[i].y() * rule.points[i].y();
  CHECK(s == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("ear clipping handles a fan-hostile polygon") {
  // The comb's centroid fan has inverted triangles.
  const std::vector<Point> ring{{0, 0}, {1, 0}, {1, 1}, {0.9, 1}, {0.9, 0.1}, {0.1, 0.1}, {0.1, 1}, {0, 1}};
  const ElementGeometry g = polygon_geometry(ring);
  const auto tris = triangulate(g);
  CHECK(tris.size() == ring.size() - 2);
  double area = 0.0;
  for (const auto& t : tris) {
    const double a = 0.5 * ((t[1] - t[0]).x() * (t[2] - t[0]).y() - (t[1] - t[0]).y() * (t[2] - t[0]).x());
    CHECK(a > 0.0);
    area += a;
  }
  CHECK(area == doctest::Approx(g.area).epsilon(1e-14));
  const QuadratureRule rule = polygon_quadrature(g, 5);
  double q = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) q += rule.weights[i] * std::pow(rule.points[i].x(), 3) * rule.points[i].y() * rule.points[i].y();
  CHECK(q == doctest::Approx(polygon_monomial(ring, Point::Zero(), 1.0, 3, 2)).epsilon(1e-13));
}

TEST_CASE("edge quadrature matches analytic line integrals") {
  const Point p(0.2, -0.4), q(1.3, 0.7);
  for (int d = 0; d <= 9; ++d) {
    const QuadratureRule rule = edge_quadrature(p, q, d);
    CHECK(rule.total_weight() == doctest::Approx((q - p).norm()).epsilon(1e-14));
    for (int a = 0; a <= d; ++a) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i)
        s += rule.weights[i] * std::pow(rule.points[i].x(), a) * std::pow(rule.points[i].y(), d - a);
      CHECK(std::abs(s - edge_monomial(p, q, a, d - a)) < 1e-12);
    }
  }
}

TEST_CASE("edge basis s^2 integrates to |e|/3") {
  const Point p(0.1, 0.1), q(0.4, 0.5);
  const EdgeBasis eb(p, q, 3);
  CHECK(eb.coordinate(p) == doctest::Approx(-1.0));
  CHECK(eb.coordinate(q) == doctest::Approx(1.0));
  const QuadratureRule rule = edge_quadrature(p, q, 6);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * eb.values(rule.points[i])(2);
  CHECK(s == doctest::Approx((2.0 / 3.0) * (q - p).norm() / 2.0).epsilon(1e-14));
}

TEST_CASE("scaled monomial ordering and values") {
  const ScaledMonomialBasis b(Point(0.5, 0.25), 2.0, 3);
  CHECK(b.size() == 10);
  CHECK(ScaledMonomialBasis::index(0, 0) == 0);
  CHECK(ScaledMonomialBasis::index(1, 0) == 1);
  CHECK(ScaledMonomialBasis::index(0, 1) == 2);
  CHECK(ScaledMonomialBasis::index(2, 0) == 3);
  CHECK(ScaledMonomialBasis::index(1, 1) == 4);
  CHECK(ScaledMonomialBasis::index(0, 3) == 9);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(ScaledMonomialBasis::index(b.exponents()[i].x, b.exponents()[i].y) == i);
  const Point x(1.1, -0.35);
  const Eigen::VectorXd v = b.values(x);
  const double X = (1.1 - 0.5) / 2.0, Y = (-0.35 - 0.25) / 2.0;
  CHECK(v(4) == doctest::Approx(X * Y));
  CHECK(v(7) == doctest::Approx(X * X * Y));
  CHECK(v(8) == doctest::Approx(X * Y * Y));
}

TEST_CASE("gradients agree with central differences") {
  const ScaledMonomialBasis b(Point(0.3, 0.6), 0.7, 4);
  const Point x(0.45, 0.2);
  const double eps = 1e-6;
  const Eigen::Matrix2Xd g = b.gradients(x);
  const Eigen::VectorXd fdx = (b.values(x + Point(eps, 0)) - b.values(x - Point(eps, 0))) / (2 * eps);
  const Eigen::VectorXd fdy = (b.values(x + Point(0, eps)) - b.values(x - Point(0, eps))) / (2 * eps);
  CHECK((g.row(0).transpose() - fdx).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((g.row(1).transpose() - fdy).cwiseAbs().maxCoeff() < 1e-7);
  const Eigen::Matrix2Xd g1 = b.gradients(b.centre());
  CHECK(g1(0, 1) == doctest::Approx(1.0 / 0.7));
  CHECK(g1(1, 1) == 0.0);
}

TEST_CASE("derivative and Laplacian coefficient maps") {
  const ScaledMonomialBasis b(Point(0.1, 0.2), 0.8, 4);
  Eigen::VectorXd c(b.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = std::sin(1.0 + static_cast<double>(i));
  const ScaledMonomialBasis b3(b.centre(), b.scale(), 3), b2(b.centre(), b.scale(), 2);
  const Point x(0.33, -0.1);
  const Point grad = poly_grad(b, c, x);
  CHECK(poly_eval(b3, b.derivative_x() * c, x) == doctest::Approx(grad.x()).epsilon(1e-13));
  CHECK(poly_eval(b3, b.derivative_y() * c, x) == doctest::Approx(grad.y()).epsilon(1e-13));
  // Laplacian by second differences.
  const double e = 1e-4;
  const double lap = (poly_eval(b, c, x + Point(e, 0)) + poly_eval(b, c, x - Point(e, 0)) +
                      poly_eval(b, c, x + Point(0, e)) + poly_eval(b, c, x - Point(0, e)) - 4 * poly_eval(b, c, x)) /
                     (e * e);
  CHECK(poly_eval(b2, b.laplacian() * c, x) == doctest::Approx(lap).epsilon(1e-5));
}

TEST_CASE("mass matrix is symmetric positive definite") {
  const auto polys = sample_polygons(20, 5);
  for (const auto& ring : polys) {
    const ElementGeometry g = polygon_geometry(ring);
    const ScaledMonomialBasis b(g, 4);
    const Eigen::MatrixXd H = mass_matrix(g, b, 4);
    CHECK(H.rows() == 15);
    CHECK((H - H.transpose()).norm() == 0.0);
    CHECK(H(0, 0) == doctest::Approx(g.area).epsilon(1e-14));
    // H_ab against the oracle.
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        const auto ei = b.exponents()[i], ej = b.exponents()[j];
        const double ref = polygon_monomial(ring, g.centroid, g.diameter, ei.x + ej.x, ei.y + ej.y);
        CHECK(std::abs(H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref) < 1e-12 * g.area);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("weighted mass matrix") {
  const ElementGeometry g = element_geometry(square_mesh(1), 0);
  const ScaledMonomialBasis b(g, 1);
  const Eigen::MatrixXd H = mass_matrix(g, b, 0, [](const Point& x) { return x.x() + 2.0 * x.y(); }, 1);
  CHECK(H(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
}
