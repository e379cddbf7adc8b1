#pragma once

#include "vemlab/coefficients.hpp"
#include "vemlab/poly_basis.hpp"

namespace vemlab {

/// Coefficients together with a closed-form exact solution; `coeffs.f` is
/// the operator applied to `exact`, and `exact` also supplies the Dirichlet
/// data.
struct TestProblem {
  Coefficients coeffs;
  ScalarField exact;
  VectorField grad_exact;
};

/// kappa = [[y^2+1, -xy], [-xy, x^2+1]], b = (x, y), gamma = x^2 + y^3,
/// p = x^2 y + sin(2 pi x) sin(2 pi y) + 2.
TestProblem builtin_problem();

/// Location of the maximum of the built-in exact solution used for the
/// point error.
inline const Point kMaxPoint{0.781, 0.766};

/// div(-kappa grad p + b p) + gamma p at x by central differences of step
/// `step` (applied to the flux, not to a hand-expanded formula).
double apply_operator_fd(const Coefficients& coeffs, const ScalarField& p, const Point& x, double step);

}  // namespace vemlab
