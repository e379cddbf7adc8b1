#pragma once

#include "vemlab/coefficients.hpp"
#include "vemlab/mesh.hpp"
#include "vemlab/poly_basis.hpp"
#include "vemlab/vem_global.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace vemlab {

/// Per-cell polynomial representatives of a discrete solution, all in the
/// cell's scaled monomial basis.
struct CellPolynomials {
  int k = 1;
  std::vector<ScaledMonomialBasis> bases;  // degree k, one per cell
  std::vector<Eigen::VectorXd> value;      // Pi0_k p_h
  std::vector<Eigen::VectorXd> grad_x;     // Pi0_{k-1} d/dx p_h (degree k-1)
  std::vector<Eigen::VectorXd> grad_y;
  std::vector<Eigen::VectorXd> pinabla;    // PiNabla_k p_h
};

CellPolynomials project_solution(const PolyMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& dofs);

/// Which polynomial stands in for grad p_h in the H1 error.
enum class GradientSurrogate { pi0_grad, grad_pinabla };

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// Absolute errors ||p_ex - Pi0_k p_h||_L2 and |p_ex - p_h|_H1 with the
/// chosen gradient surrogate, by polygon quadrature of exactness 2k + 4.
ErrorNorms error_norms(const PolyMesh& mesh, const CellPolynomials& proj, const ScalarField& exact,
                       const VectorField& grad_exact, GradientSurrogate surrogate = GradientSurrogate::pi0_grad);

/// ||v||_L2 and |v|_H1 on the unit square with a 40 x 40 Gauss rule.
ErrorNorms unit_square_norms(const ScalarField& v, const VectorField& grad_v);

struct PointError {
  double relative = 0.0;
  std::size_t cell = 0;
  double value = 0.0;  // (Pi0_k p_h)(x)
};

/// Locates x (first cell containing it, in cell order) and compares.
PointError point_error(const PolyMesh& mesh, const CellPolynomials& proj, const ScalarField& exact, const Point& x);

struct ErrorRecord {
  double h_max = 0.0;
  std::size_t n_cells = 0;
  std::size_t dofs = 0;
  double err_L2_rel = 0.0;
  double err_H1_rel = 0.0;
  double err_point_rel = 0.0;
  bool failed = false;
  std::string message;
};

struct ConvergenceReport {
  std::vector<ErrorRecord> records;
  /// Least-squares slopes of log(err) against log(h); nullopt with < 2 usable records.
  std::optional<double> slope_L2;
  std::optional<double> slope_H1;
  std::optional<double> slope_point;
  /// pairwise[i] relates records[i-1] and records[i]; entry 0 is empty.
  std::vector<std::optional<double>> pairwise_L2;
  std::vector<std::optional<double>> pairwise_H1;
  std::vector<std::string> warnings;
};

double max_diameter(const PolyMesh& mesh);

/// Least-squares slope of log(err) vs log(h). Failed records and repeated h
/// values (after the first) are excluded with a warning.
ConvergenceReport convergence_rates(std::vector<ErrorRecord> records);

}  // namespace vemlab
