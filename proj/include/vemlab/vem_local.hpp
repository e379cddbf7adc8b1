#pragma once

#include "vemlab/coefficients.hpp"
#include "vemlab/mesh.hpp"
#include "vemlab/poly_basis.hpp"
#include "vemlab/quadrature.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace vemlab {

/// Which gradient surrogate enters the consistency part of a_h.
enum class ConsistencyMode {
  standard,      // kappa [Pi0_{k-1} grad p] . [Pi0_{k-1} grad q]
  grad_pinabla,  // kappa [grad PiNabla_k p] . [grad PiNabla_k q]
};

std::string_view to_string(ConsistencyMode mode);
ConsistencyMode parse_mode(std::string_view name);

/// Local degrees of freedom of the order-k virtual space on one polygon.
///
/// Ordering: vertex values in ring order, then k-1 moments per edge (edge by
/// edge, in ring order), then the k(k-1)/2 internal moments in monomial
/// order. Edge moments are (1/|e|) int_e q s^j with s the scaled arclength in
/// the canonical edge direction; internal moments are (1/|E|) int_E q m_a.
struct DofLayout {
  int k = 1;
  std::size_t num_vertices = 0;

  std::size_t vertex_dofs() const { return num_vertices; }
  std::size_t edge_dofs_per_edge() const { return static_cast<std::size_t>(k - 1); }
  std::size_t edge_dofs() const { return num_vertices * edge_dofs_per_edge(); }
  std::size_t internal_dofs() const { return static_cast<std::size_t>(k * (k - 1) / 2); }
  std::size_t size() const { return vertex_dofs() + edge_dofs() + internal_dofs(); }

  std::size_t vertex_dof(std::size_t v) const { return v; }
  std::size_t edge_dof(std::size_t e, std::size_t j) const {
    return num_vertices + e * edge_dofs_per_edge() + j;
  }
  std::size_t internal_dof(std::size_t a) const { return num_vertices + edge_dofs() + a; }
};

DofLayout dof_layout(const ElementGeometry& geom, int k);

/// Degrees of freedom of a smooth function. `exactness` is the polynomial
/// degree of the quadrature used for the moments (default: 2k + 14).
Eigen::VectorXd interpolate_dofs(const ElementGeometry& geom, int k, const ScalarField& v, int exactness = -1);

/// DoF vectors of the scaled monomials (n_D x n_k, column a = dofs of m_a).
Eigen::MatrixXd basis_dofs(const ElementGeometry& geom, int k);

/// Projection matrices acting on local DoF vectors and returning scaled
/// monomial coefficients.
struct ProjectorSet {
  Eigen::MatrixXd pi_nabla;    // n_k x n_D
  Eigen::MatrixXd pi0_k;       // n_k x n_D
  Eigen::MatrixXd pi0_km1;     // n_{k-1} x n_D
  Eigen::MatrixXd pi0_grad_x;  // n_{k-1} x n_D
  Eigen::MatrixXd pi0_grad_y;  // n_{k-1} x n_D
  Eigen::MatrixXd grad_nabla_x;  // grad PiNabla, n_{k-1} x n_D
  Eigen::MatrixXd grad_nabla_y;
  Eigen::MatrixXd G;           // PiNabla system matrix (constant row replaced)
  Eigen::MatrixXd B;           // PiNabla right-hand side
  Eigen::MatrixXd D;           // basis_dofs
};

Eigen::MatrixXd pi_nabla(const ElementGeometry& geom, int k, const DofLayout& layout);
Eigen::MatrixXd pi0_k(const ElementGeometry& geom, int k, const DofLayout& layout, const Eigen::MatrixXd& pi_nabla);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> pi0_grad(const ElementGeometry& geom, int k, const DofLayout& layout);

ProjectorSet compute_projectors(const ElementGeometry& geom, int k);

/// sigma_E (I - D PiNabla)^T (I - D PiNabla), sigma_E the mean of tr(kappa)/2.
Eigen::MatrixXd stab_matrix(const ElementGeometry& geom, int k, const DofLayout& layout,
                            const Eigen::MatrixXd& pi_nabla, const Eigen::MatrixXd& D,
                            const Coefficients& coeffs, int quad_boost = 2);

struct LocalSystem {
  Eigen::MatrixXd Ah;           // consistency + S
  Eigen::MatrixXd consistency;  // Ah without the stabilisation
  Eigen::MatrixXd Bh;
  Eigen::MatrixXd Ch;
  Eigen::MatrixXd S;
  Eigen::VectorXd f_loc;
  ConsistencyMode mode = ConsistencyMode::standard;

  /// Ah + Bh + Ch, rows indexed by test functions, columns by trial ones.
  Eigen::MatrixXd total() const { return Ah + Bh + Ch; }
};

/// Coefficient integrals use a polygon rule of exactness 2k + quad_boost.
LocalSystem local_system(const ElementGeometry& geom, int k, const ProjectorSet& proj, const Coefficients& coeffs,
                         ConsistencyMode mode, int quad_boost = 2);
LocalSystem local_system(const ElementGeometry& geom, int k, const Coefficients& coeffs, ConsistencyMode mode,
                         int quad_boost = 2);

}  // namespace vemlab
