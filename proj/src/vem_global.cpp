#include "vemlab/vem_global.hpp"

#include <Eigen/SparseLU>

#include <map>

namespace vemlab {

namespace {

using Eigen::Index;
using Eigen::VectorXd;

Index ix(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

std::size_t DofMap::num_boundary() const {
  std::size_t n = 0;
  for (bool b : is_boundary) n += b ? 1 : 0;
  return n;
}

DofMap build_dofmap(const PolyMesh& mesh, int k) {
  if (k < 1) throw std::invalid_argument("build_dofmap: k must be >= 1");
  DofMap map;
  map.k = k;
  map.num_vertex_dofs = mesh.num_vertices();
  map.num_cells = mesh.num_cells();

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  std::vector<std::vector<std::size_t>> cell_edges(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& ring = mesh.cells[c];
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t a = ring[i];
      const std::size_t b = ring[(i + 1) % ring.size()];
      const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      auto [it, inserted] = edge_index.emplace(key, map.edges.size());
      if (inserted) map.edges.push_back(key);
      cell_edges[c].push_back(it->second);
    }
  }
  map.num_edges = map.edges.size();

  map.cell_dofs.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& ring = mesh.cells[c];
    auto& dofs = map.cell_dofs[c];
    dofs.reserve(ring.size() * static_cast<std::size_t>(k) + map.internal_dofs_per_cell());
    for (std::size_t v : ring) dofs.push_back(v);
    for (std::size_t e : cell_edges[c])
      for (std::size_t j = 0; j < map.edge_dofs_per_edge(); ++j) dofs.push_back(map.edge_dof(e, j));
    for (std::size_t a = 0; a < map.internal_dofs_per_cell(); ++a) dofs.push_back(map.internal_dof(c, a));
  }

  map.is_boundary.assign(map.size(), false);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) map.is_boundary[v] = mesh.boundary_vertex_flags[v];
  for (const auto& be : mesh.boundary_edges) {
    const std::size_t e = cell_edges[be.cell][be.local_edge];
    for (std::size_t j = 0; j < map.edge_dofs_per_edge(); ++j) map.is_boundary[map.edge_dof(e, j)] = true;
  }
  return map;
}

namespace {

void eliminate(SparseSystem& sys) {
  const DofMap& map = sys.dofmap;
  sys.interior_dofs.clear();
  sys.reduced_index.assign(map.size(), -1);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (!map.is_boundary[i]) {
      sys.reduced_index[i] = static_cast<long>(sys.interior_dofs.size());
      sys.interior_dofs.push_back(i);
    }
  const auto n = ix(sys.interior_dofs.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(sys.full_matrix.nonZeros()));
  VectorXd rhs = VectorXd::Zero(n);
  for (std::size_t i = 0; i < sys.interior_dofs.size(); ++i) rhs(ix(i)) = sys.full_rhs(ix(sys.interior_dofs[i]));
  for (Index col = 0; col < sys.full_matrix.outerSize(); ++col) {
    const long rc = sys.reduced_index[static_cast<std::size_t>(col)];
    for (SparseMatrix::InnerIterator it(sys.full_matrix, col); it; ++it) {
      const long rr = sys.reduced_index[static_cast<std::size_t>(it.row())];
      if (rr < 0) continue;
      if (rc >= 0)
        triplets.emplace_back(static_cast<int>(rr), static_cast<int>(rc), it.value());
      else
        rhs(rr) -= it.value() * sys.lifting(col);
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = std::move(rhs);
}

}  // namespace

SparseSystem assemble(const PolyMesh& mesh, int k, const Coefficients& coeffs, ConsistencyMode mode,
                      const AssemblyOptions& options) {
  SparseSystem sys;
  sys.dofmap = build_dofmap(mesh, k);
  const DofMap& map = sys.dofmap;
  const auto n = ix(map.size());

  std::vector<Eigen::Triplet<double>> triplets;
  sys.full_rhs = VectorXd::Zero(n);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geom = element_geometry(mesh, c);
    const LocalSystem local = local_system(geom, k, coeffs, mode, options.quad_boost);
    const Eigen::MatrixXd block = local.total();
    const auto& dofs = map.cell_dofs[c];
    if (static_cast<std::size_t>(block.rows()) != dofs.size())
      throw std::logic_error("assemble: local/global dimension mismatch in cell " + std::to_string(c));
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      sys.full_rhs(ix(dofs[i])) += local.f_loc(ix(i));
      for (std::size_t j = 0; j < dofs.size(); ++j)
        triplets.emplace_back(static_cast<int>(dofs[i]), static_cast<int>(dofs[j]), block(ix(i), ix(j)));
    }
  }
  sys.full_matrix.resize(n, n);
  sys.full_matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.full_matrix.makeCompressed();
  sys.lifting = VectorXd::Zero(n);
  eliminate(sys);
  return sys;
}

VectorXd global_interpolant(const PolyMesh& mesh, const DofMap& map, const ScalarField& v) {
  VectorXd dofs = VectorXd::Zero(ix(map.size()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) dofs(ix(i)) = v(mesh.vertices[i]);
  const int k = map.k;
  if (k < 2) return dofs;
  const int exactness = 2 * k + 14;
  for (std::size_t e = 0; e < map.num_edges; ++e) {
    const Point& from = mesh.vertices[map.edges[e].first];
    const Point& to = mesh.vertices[map.edges[e].second];
    const double length = (to - from).norm();
    const QuadratureRule rule = edge_quadrature(from, to, exactness);
    const EdgeBasis along(from, to, k - 2);
    for (std::size_t g = 0; g < rule.size(); ++g) {
      const VectorXd sj = along.values(rule.points[g]);
      const double w = rule.weights[g] * v(rule.points[g]) / length;
      for (std::size_t j = 0; j < map.edge_dofs_per_edge(); ++j) dofs(ix(map.edge_dof(e, j))) += w * sj(ix(j));
    }
  }
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geom = element_geometry(mesh, c);
    const DofLayout layout = dof_layout(geom, k);
    const VectorXd local = interpolate_dofs(geom, k, v);
    for (std::size_t a = 0; a < layout.internal_dofs(); ++a)
      dofs(ix(map.internal_dof(c, a))) = local(ix(layout.internal_dof(a)));
  }
  return dofs;
}

void apply_dirichlet(SparseSystem& system, const ScalarField& g, const PolyMesh& mesh, int k) {
  if (system.dofmap.k != k) throw std::invalid_argument("apply_dirichlet: degree mismatch");
  const VectorXd values = global_interpolant(mesh, system.dofmap, g);
  system.lifting = VectorXd::Zero(ix(system.dofmap.size()));
  for (std::size_t i = 0; i < system.dofmap.size(); ++i)
    if (system.dofmap.is_boundary[i]) system.lifting(ix(i)) = values(ix(i));
  eliminate(system);
}

VectorXd solve(const SparseSystem& system, SolveInfo* info) {
  VectorXd full = system.lifting;
  if (system.interior_dofs.empty()) {
    if (info) info->relative_residual = 0.0;
    return full;
  }
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success)
    throw SolveError("sparse LU factorisation failed (singular system; mesh may be too coarse): " +
                     lu.lastErrorMessage());
  const VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolveError("sparse LU back-substitution failed");
  const double bnorm = system.rhs.norm();
  const double res = (system.matrix * x - system.rhs).norm() / (bnorm > 0.0 ? bnorm : 1.0);
  if (info) info->relative_residual = res;
  if (!(res < 1e-10)) throw SolveError("solve residual " + std::to_string(res) + " exceeds 1e-10");
  for (std::size_t i = 0; i < system.interior_dofs.size(); ++i) full(ix(system.interior_dofs[i])) = x(ix(i));
  return full;
}

VectorXd gather(const DofMap& map, std::size_t cell, const VectorXd& global) {
  const auto& dofs = map.cell_dofs[cell];
  VectorXd local(ix(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) local(ix(i)) = global(ix(dofs[i]));
  return local;
}

}  // namespace vemlab
