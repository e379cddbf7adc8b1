#pragma once

#include "vemlab/coefficients.hpp"
#include "vemlab/mesh.hpp"
#include "vemlab/vem_local.hpp"

#include <Eigen/Sparse>

#include <stdexcept>
#include <vector>

namespace vemlab {

/// Raised when the global factorisation is singular or inaccurate, which on
/// coarse meshes signals that h is above the stability threshold.
class SolveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Global numbering: all vertices, then k-1 DoFs per edge (edges in order of
/// first appearance while walking the cells), then k(k-1)/2 internal DoFs per
/// cell. Edge moments use the canonical direction (lower vertex id first), so
/// both neighbours of an edge agree on them without sign changes.
struct DofMap {
  int k = 1;
  std::size_t num_vertex_dofs = 0;
  std::size_t num_edges = 0;
  std::size_t num_cells = 0;
  std::vector<std::vector<std::size_t>> cell_dofs;           // local -> global
  std::vector<std::pair<std::size_t, std::size_t>> edges;    // canonical (lo, hi) vertex ids
  std::vector<bool> is_boundary;                              // per global DoF

  std::size_t edge_dofs_per_edge() const { return static_cast<std::size_t>(k - 1); }
  std::size_t internal_dofs_per_cell() const { return static_cast<std::size_t>(k * (k - 1) / 2); }
  std::size_t size() const {
    return num_vertex_dofs + num_edges * edge_dofs_per_edge() + num_cells * internal_dofs_per_cell();
  }
  std::size_t edge_dof(std::size_t edge, std::size_t j) const {
    return num_vertex_dofs + edge * edge_dofs_per_edge() + j;
  }
  std::size_t internal_dof(std::size_t cell, std::size_t a) const {
    return num_vertex_dofs + num_edges * edge_dofs_per_edge() + cell * internal_dofs_per_cell() + a;
  }
  std::size_t num_boundary() const;
};

DofMap build_dofmap(const PolyMesh& mesh, int k);

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SparseSystem {
  DofMap dofmap;
  SparseMatrix full_matrix;  // all DoFs, before elimination
  Eigen::VectorXd full_rhs;

  std::vector<std::size_t> interior_dofs;  // reduced index -> global DoF
  std::vector<long> reduced_index;         // global DoF -> reduced index, -1 on the boundary
  SparseMatrix matrix;                     // interior block
  Eigen::VectorXd rhs;                     // interior rhs with the lifting moved over
  Eigen::VectorXd lifting;                 // global vector holding boundary values
};

struct AssemblyOptions {
  int quad_boost = 2;
};

/// Assembles B_h and (f_h, .) and eliminates homogeneous Dirichlet data.
SparseSystem assemble(const PolyMesh& mesh, int k, const Coefficients& coeffs, ConsistencyMode mode,
                      const AssemblyOptions& options = {});

/// Replaces the lifting by the DoFs of g on the boundary and rebuilds the
/// reduced right-hand side.
void apply_dirichlet(SparseSystem& system, const ScalarField& g, const PolyMesh& mesh, int k);

struct SolveInfo {
  double relative_residual = 0.0;
};

/// Sparse LU solve; returns the full global DoF vector (interior + lifting).
Eigen::VectorXd solve(const SparseSystem& system, SolveInfo* info = nullptr);

/// Global DoFs of a smooth function (vertex values, canonical edge moments,
/// internal moments).
Eigen::VectorXd global_interpolant(const PolyMesh& mesh, const DofMap& dofmap, const ScalarField& v);

/// Restriction of a global vector to one cell's local DoF ordering.
Eigen::VectorXd gather(const DofMap& dofmap, std::size_t cell, const Eigen::VectorXd& global);

}  // namespace vemlab
