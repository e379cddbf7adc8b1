#include "vemlab/postprocess.hpp"

#include "vemlab/quadrature.hpp"
#include "vemlab/vem_local.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace vemlab {

CellPolynomials project_solution(const PolyMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& dofs) {
  CellPolynomials out;
  out.k = dofmap.k;
  const std::size_t n = mesh.num_cells();
  out.bases.reserve(n);
  out.value.reserve(n);
  out.grad_x.reserve(n);
  out.grad_y.reserve(n);
  out.pinabla.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    const ElementGeometry geom = element_geometry(mesh, c);
    const ProjectorSet proj = compute_projectors(geom, dofmap.k);
    const Eigen::VectorXd local = gather(dofmap, c, dofs);
    out.bases.emplace_back(geom, dofmap.k);
    out.value.push_back(proj.pi0_k * local);
    out.grad_x.push_back(proj.pi0_grad_x * local);
    out.grad_y.push_back(proj.pi0_grad_y * local);
    out.pinabla.push_back(proj.pi_nabla * local);
  }
  return out;
}

ErrorNorms error_norms(const PolyMesh& mesh, const CellPolynomials& proj, const ScalarField& exact,
                       const VectorField& grad_exact, GradientSurrogate surrogate) {
  const int k = proj.k;
  double l2 = 0.0;
  double h1 = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geom = element_geometry(mesh, c);
    const QuadratureRule rule = polygon_quadrature(geom, 2 * k + 4);
    const ScaledMonomialBasis& basis = proj.bases[c];
    const auto nkm1 = static_cast<Eigen::Index>(dim_pk(k - 1));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& x = rule.points[q];
      const Eigen::VectorXd m = basis.values(x);
      const double diff = exact(x) - m.dot(proj.value[c]);
      Point grad_h;
      if (surrogate == GradientSurrogate::pi0_grad)
        grad_h = Point(m.head(nkm1).dot(proj.grad_x[c]), m.head(nkm1).dot(proj.grad_y[c]));
      else
        grad_h = basis.gradients(x) * proj.pinabla[c];
      const Point gdiff = grad_exact(x) - grad_h;
      l2 += rule.weights[q] * diff * diff;
      h1 += rule.weights[q] * gdiff.squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

ErrorNorms unit_square_norms(const ScalarField& v, const VectorField& grad_v) {
  const GaussRule1D g = gauss_legendre(40);
  double l2 = 0.0;
  double h1 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const Point x(0.5 * (1.0 + g.nodes[i]), 0.5 * (1.0 + g.nodes[j]));
      const double w = 0.25 * g.weights[i] * g.weights[j];
      const double val = v(x);
      l2 += w * val * val;
      h1 += w * grad_v(x).squaredNorm();
    }
  return {std::sqrt(l2), std::sqrt(h1)};
}

PointError point_error(const PolyMesh& mesh, const CellPolynomials& proj, const ScalarField& exact, const Point& x) {
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    std::vector<Point> ring;
    ring.reserve(mesh.cells[c].size());
    for (std::size_t v : mesh.cells[c]) ring.push_back(mesh.vertices[v]);
    if (!point_in_polygon(ring, x)) continue;
    PointError pe;
    pe.cell = c;
    pe.value = poly_eval(proj.bases[c], proj.value[c], x);
    const double ref = exact(x);
    pe.relative = std::abs(ref - pe.value) / std::abs(ref);
    return pe;
  }
  throw std::invalid_argument("point_error: point lies outside the mesh");
}

double max_diameter(const PolyMesh& mesh) {
  double h = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) h = std::max(h, element_geometry(mesh, c).diameter);
  return h;
}

namespace {

std::optional<double> fit_slope(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > 0.0) || !(h[i] > 0.0)) continue;
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(err[i]));
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::optional<double> pair_slope(double h0, double e0, double h1, double e1) {
  if (!(h0 > 0.0 && h1 > 0.0 && e0 > 0.0 && e1 > 0.0) || h0 == h1) return std::nullopt;
  return std::log(e1 / e0) / std::log(h1 / h0);
}

}  // namespace

ConvergenceReport convergence_rates(std::vector<ErrorRecord> records) {
  ConvergenceReport rep;
  rep.records = std::move(records);
  std::vector<double> h, l2, h1, pt;
  std::vector<double> seen;
  for (const auto& r : rep.records) {
    if (r.failed) {
      rep.warnings.push_back("record with " + std::to_string(r.n_cells) + " cells failed; excluded from fit");
      continue;
    }
    if (std::find(seen.begin(), seen.end(), r.h_max) != seen.end()) {
      rep.warnings.push_back("repeated h = " + std::to_string(r.h_max) + "; excluded from fit");
      continue;
    }
    seen.push_back(r.h_max);
    h.push_back(r.h_max);
    l2.push_back(r.err_L2_rel);
    h1.push_back(r.err_H1_rel);
    pt.push_back(r.err_point_rel);
  }
  rep.slope_L2 = fit_slope(h, l2);
  rep.slope_H1 = fit_slope(h, h1);
  rep.slope_point = fit_slope(h, pt);

  rep.pairwise_L2.assign(rep.records.size(), std::nullopt);
  rep.pairwise_H1.assign(rep.records.size(), std::nullopt);
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    const auto& a = rep.records[i - 1];
    const auto& b = rep.records[i];
    if (a.failed || b.failed) continue;
    rep.pairwise_L2[i] = pair_slope(a.h_max, a.err_L2_rel, b.h_max, b.err_L2_rel);
    rep.pairwise_H1[i] = pair_slope(a.h_max, a.err_H1_rel, b.h_max, b.err_H1_rel);
  }
  return rep;
}

}  // namespace vemlab
