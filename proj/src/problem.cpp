#include "vemlab/problem.hpp"

#include <cmath>
#include <numbers>

namespace vemlab {

TestProblem builtin_problem() {
  constexpr double pi = std::numbers::pi;
  constexpr double tpi = 2.0 * pi;

  TestProblem prob;
  prob.coeffs.kappa = [](const Point& p) -> Eigen::Matrix2d {
    const double x = p.x(), y = p.y();
    Eigen::Matrix2d k;
    k << y * y + 1.0, -x * y, -x * y, x * x + 1.0;
    return k;
  };
  prob.coeffs.b = [](const Point& p) -> Point { return p; };
  prob.coeffs.gamma = [](const Point& p) { return p.x() * p.x() + p.y() * p.y() * p.y(); };
  // det(kappa) = 1 + x^2 + y^2 and trace = 2 + x^2 + y^2, so the smallest
  // eigenvalue is 1 everywhere.
  prob.coeffs.kappa0 = 1.0;

  prob.exact = [](const Point& p) {
    const double x = p.x(), y = p.y();
    return x * x * y + std::sin(tpi * x) * std::sin(tpi * y) + 2.0;
  };
  prob.grad_exact = [](const Point& p) -> Point {
    const double x = p.x(), y = p.y();
    return {2.0 * x * y + tpi * std::cos(tpi * x) * std::sin(tpi * y),
            x * x + tpi * std::sin(tpi * x) * std::cos(tpi * y)};
  };

  // f = -(y^2+1) p_xx + 2xy p_xy - (x^2+1) p_yy + 2x p_x + 2y p_y + (2 + gamma) p
  // (the first-order terms collect -div(kappa) . grad p and b . grad p;
  // the zeroth order one div b = 2).
  prob.coeffs.f = [](const Point& p) {
    const double x = p.x(), y = p.y();
    const double sx = std::sin(tpi * x), cx = std::cos(tpi * x);
    const double sy = std::sin(tpi * y), cy = std::cos(tpi * y);
    const double four_pi2 = 4.0 * pi * pi;
    const double u = x * x * y + sx * sy + 2.0;
    const double ux = 2.0 * x * y + tpi * cx * sy;
    const double uy = x * x + tpi * sx * cy;
    const double uxx = 2.0 * y - four_pi2 * sx * sy;
    const double uyy = -four_pi2 * sx * sy;
    const double uxy = 2.0 * x + four_pi2 * cx * cy;
    const double gamma = x * x + y * y * y;
    return -(y * y + 1.0) * uxx + 2.0 * x * y * uxy - (x * x + 1.0) * uyy + 2.0 * x * ux + 2.0 * y * uy +
           (2.0 + gamma) * u;
  };
  return prob;
}

double apply_operator_fd(const Coefficients& coeffs, const ScalarField& p, const Point& x, double step) {
  // Flux F = -kappa grad p + b p, gradient by central differences.
  auto flux = [&](const Point& y) -> Point {
    const Point ex(step, 0.0), ey(0.0, step);
    const Point grad((p(y + ex) - p(y - ex)) / (2.0 * step), (p(y + ey) - p(y - ey)) / (2.0 * step));
    Point fl = -(coeffs.kappa(y) * grad);
    if (coeffs.b) fl += coeffs.b(y) * p(y);
    return fl;
  };
  const Point ex(step, 0.0), ey(0.0, step);
  const double div = (flux(x + ex).x() - flux(x - ex).x()) / (2.0 * step) +
                     (flux(x + ey).y() - flux(x - ey).y()) / (2.0 * step);
  return div + (coeffs.gamma ? coeffs.gamma(x) * p(x) : 0.0);
}

}  // namespace vemlab
