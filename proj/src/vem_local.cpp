#include "vemlab/vem_local.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vemlab {

std::string_view to_string(ConsistencyMode mode) {
  return mode == ConsistencyMode::standard ? "standard" : "grad_pinabla";
}

ConsistencyMode parse_mode(std::string_view name) {
  if (name == "standard") return ConsistencyMode::standard;
  if (name == "grad_pinabla") return ConsistencyMode::grad_pinabla;
  throw std::invalid_argument("unknown consistency mode '" + std::string(name) + "'");
}

DofLayout dof_layout(const ElementGeometry& geom, int k) {
  if (k < 1) throw std::invalid_argument("dof_layout: k must be >= 1");
  return DofLayout{k, geom.num_vertices()};
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index ix(std::size_t i) { return static_cast<Index>(i); }

/// Sign of the canonical arclength relative to the ring direction.
double edge_sign(const EdgeGeometry& e) { return e.reversed ? -1.0 : 1.0; }

/// Gauss points on one edge and the map from local DoFs to the values of the
/// degree-k edge trace at those points.
struct EdgeTrace {
  QuadratureRule rule;
  std::vector<double> t;  // ring-direction coordinate in [-1, 1]
  MatrixXd values;        // n_gauss x n_D
};

/// Reconstructs q|_e in P_k(e) from the two endpoint values and the k-1
/// edge moments: q(t) = sum_m c_m t^m, t running from start to end.
MatrixXd edge_reconstruction(int k, double sign) {
  const int n = k + 1;
  MatrixXd v = MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    v(0, m) = (m % 2 == 0) ? 1.0 : -1.0;
    v(1, m) = 1.0;
    for (int j = 0; j + 2 < n; ++j)
      if ((m + j) % 2 == 0) v(j + 2, m) = std::pow(sign, j) / (m + j + 1);
  }
  return v.inverse();
}

std::vector<EdgeTrace> boundary_traces(const ElementGeometry& geom, int k, const DofLayout& layout,
                                       int exactness) {
  std::vector<EdgeTrace> traces;
  traces.reserve(geom.edges.size());
  const std::size_t nv = geom.num_vertices();
  for (std::size_t e = 0; e < nv; ++e) {
    const auto& edge = geom.edges[e];
    EdgeTrace tr;
    tr.rule = edge_quadrature(edge.start, edge.end, exactness);
    const MatrixXd recon = edge_reconstruction(k, edge_sign(edge));
    tr.values = MatrixXd::Zero(ix(tr.rule.size()), ix(layout.size()));
    const EdgeBasis along(edge.start, edge.end, k);
    for (std::size_t g = 0; g < tr.rule.size(); ++g) {
      const double t = along.coordinate(tr.rule.points[g]);
      tr.t.push_back(t);
      const VectorXd row = along.values(t).transpose() * recon;
      const auto gi = ix(g);
      tr.values(gi, ix(layout.vertex_dof(e))) += row(0);
      tr.values(gi, ix(layout.vertex_dof((e + 1) % nv))) += row(1);
      for (int j = 0; j + 1 < k; ++j) tr.values(gi, ix(layout.edge_dof(e, static_cast<std::size_t>(j)))) += row(j + 2);
    }
    traces.push_back(std::move(tr));
  }
  return traces;
}

/// Everything the projectors share on one element.
struct ElementIntegrals {
  int k;
  DofLayout layout;
  ScaledMonomialBasis basis;
  QuadratureRule area_rule;
  std::vector<EdgeTrace> traces;
  MatrixXd H;  // P_k mass matrix

  ElementIntegrals(const ElementGeometry& geom, int degree)
      : k(degree),
        layout(dof_layout(geom, degree)),
        basis(geom, degree),
        area_rule(polygon_quadrature(geom, 2 * degree)),
        traces(boundary_traces(geom, degree, layout, 2 * degree)),
        H(mass_matrix(basis, area_rule, degree)) {}

  std::size_t nk() const { return basis.size(); }
  std::size_t nkm1() const { return dim_pk(k - 1); }
  std::size_t nkm2() const { return dim_pk(k - 2); }
};

MatrixXd basis_dofs_impl(const ElementGeometry& geom, const ElementIntegrals& ei) {
  const auto& layout = ei.layout;
  MatrixXd d = MatrixXd::Zero(ix(layout.size()), ix(ei.nk()));
  for (std::size_t v = 0; v < geom.num_vertices(); ++v)
    d.row(ix(layout.vertex_dof(v))) = ei.basis.values(geom.vertices[v]).transpose();
  for (std::size_t e = 0; e < geom.edges.size(); ++e) {
    const auto& edge = geom.edges[e];
    const auto& tr = ei.traces[e];
    for (std::size_t g = 0; g < tr.rule.size(); ++g) {
      const VectorXd m = ei.basis.values(tr.rule.points[g]);
      const double s = edge_sign(edge) * tr.t[g];
      double sj = 1.0;
      for (std::size_t j = 0; j < layout.edge_dofs_per_edge(); ++j, sj *= s)
        d.row(ix(layout.edge_dof(e, j))) += (tr.rule.weights[g] * sj / edge.length) * m.transpose();
    }
  }
  for (std::size_t a = 0; a < ei.nkm2(); ++a) d.row(ix(layout.internal_dof(a))) = ei.H.row(ix(a)) / geom.area;
  return d;
}

/// Gradients with respect to the scaled coordinates (X, Y) = (x - x_E) / h_E,
/// i.e. h_E times the physical gradient, without rounding through 1/h_E.
Eigen::Matrix2Xd scaled_gradients(const ScaledMonomialBasis& basis, const Point& x) {
  const VectorXd v = basis.values(x);
  Eigen::Matrix2Xd g = Eigen::Matrix2Xd::Zero(2, v.size());
  const auto& ex = basis.exponents();
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const auto [a, b] = ex[i];
    if (a > 0) g(0, ix(i)) = a * v(ix(ScaledMonomialBasis::index(a - 1, b)));
    if (b > 0) g(1, ix(i)) = b * v(ix(ScaledMonomialBasis::index(a, b - 1)));
  }
  return g;
}

/// PiNabla system in scaled units: rows a >= 1 hold h^2 G and h B, row 0
/// the boundary-mean closure (unscaled).
void pi_nabla_system(const ElementGeometry& geom, const ElementIntegrals& ei, MatrixXd& G, MatrixXd& B) {
  const auto nk = ix(ei.nk());
  const auto nd = ix(ei.layout.size());
  G = MatrixXd::Zero(nk, nk);
  for (std::size_t q = 0; q < ei.area_rule.size(); ++q) {
    const Eigen::Matrix2Xd grad = scaled_gradients(ei.basis, ei.area_rule.points[q]);
    G.noalias() += ei.area_rule.weights[q] * grad.transpose() * grad;
  }
  B = MatrixXd::Zero(nk, nd);

  // Gradient rows: int_E grad q . grad m_a = -int_E q lap(m_a) + int_dE q dm_a/dn.
  const double perimeter = geom.perimeter();
  Eigen::RowVectorXd mean_row = Eigen::RowVectorXd::Zero(nk);
  for (std::size_t e = 0; e < geom.edges.size(); ++e) {
    const auto& tr = ei.traces[e];
    const Point& n = geom.edges[e].normal;
    for (std::size_t g = 0; g < tr.rule.size(); ++g) {
      const double w = tr.rule.weights[g];
      const Eigen::Matrix2Xd grad = scaled_gradients(ei.basis, tr.rule.points[g]);
      const VectorXd dn = grad.transpose() * n;
      B.noalias() += w * dn * tr.values.row(ix(g));
      // Constant row: boundary mean of q and of the monomials.
      B.row(0) += (w / perimeter) * tr.values.row(ix(g));
      mean_row += (w / perimeter) * ei.basis.values(tr.rule.points[g]).transpose();
    }
  }
  if (ei.k >= 2) {
    // Laplacian in scaled coordinates; h * (|E| / h^2) = |E| / h.
    const MatrixXd lap = ScaledMonomialBasis(geom.centroid, 1.0, ei.k).laplacian();
    const double f = geom.area / geom.diameter;
    for (std::size_t b = 0; b < ei.nkm2(); ++b)
      for (Index a = 1; a < nk; ++a)
        B(a, ix(ei.layout.internal_dof(b))) -= f * lap(ix(b), a);
  }
  // The boundary-normal part of row 0 accumulated above is the (zero)
  // derivative of m_0 plus the mean; keep only the mean.
  G.row(0) = mean_row;
}

MatrixXd pi_nabla_impl(const ElementGeometry& geom, const ElementIntegrals& ei, MatrixXd* G_out = nullptr,
                       MatrixXd* B_out = nullptr, MatrixXd* gx_out = nullptr, MatrixXd* gy_out = nullptr) {
  MatrixXd G;
  MatrixXd B;
  pi_nabla_system(geom, ei, G, B);
  // grad m_0 = 0, so G is block triangular: solve the gradient block, then
  // the constant from the boundary-mean row.
  const Index nk = G.rows();
  const double h = geom.diameter;
  MatrixXd p(nk, B.cols());
  if (nk > 1) {
    const Eigen::LDLT<MatrixXd> ldlt(G.bottomRightCorner(nk - 1, nk - 1));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw std::runtime_error("pi_nabla: singular projector system");
    const MatrixXd s = ldlt.solve(B.bottomRows(nk - 1));
    p.bottomRows(nk - 1) = h * s;
    // grad PiNabla = sum_a s_a grad_(X,Y) m_a; integer derivative maps, no h.
    if (gx_out && gy_out) {
      const ScaledMonomialBasis unit(geom.centroid, 1.0, ei.k);
      *gx_out = unit.derivative_x().rightCols(nk - 1) * s;
      *gy_out = unit.derivative_y().rightCols(nk - 1) * s;
    }
    p.row(0) = (B.row(0) - G.row(0).tail(nk - 1) * p.bottomRows(nk - 1)) / G(0, 0);
    // Report G and B in physical units.
    G.bottomRows(nk - 1) /= h * h;
    B.bottomRows(nk - 1) /= h;
  } else {
    p.row(0) = B.row(0) / G(0, 0);
  }
  if (G_out) *G_out = std::move(G);
  if (B_out) *B_out = std::move(B);
  return p;
}

/// Pi0_k q. Its moments against P_k are H PiNabla + H[:, low] d, with the
/// P_{k-2} part read from the internal DoFs and the orthogonal complement
/// matched to PiNabla q, so Pi0_k = PiNabla + [d; 0] where
/// d = H_low^{-1} (internal - H[low, :] PiNabla). Only the P_{k-2} block is
/// solved; the full P_k mass matrix is badly conditioned at k = 4.
MatrixXd pi0_k_impl(const ElementGeometry& geom, const ElementIntegrals& ei, const MatrixXd& pinabla) {
  const auto low = ix(ei.nkm2());
  MatrixXd p = pinabla;
  if (low == 0) return p;
  MatrixXd r = -ei.H.topRows(low) * pinabla;
  for (Index a = 0; a < low; ++a) r(a, ix(ei.layout.internal_dof(static_cast<std::size_t>(a)))) += geom.area;
  p.topRows(low) += ei.H.topLeftCorner(low, low).ldlt().solve(r);
  return p;
}

std::pair<MatrixXd, MatrixXd> pi0_grad_impl(const ElementGeometry& geom, const ElementIntegrals& ei) {
  const auto nkm1 = ix(ei.nkm1());
  const auto nd = ix(ei.layout.size());
  // R_c(b, :) = -int_E q d_c m_b + int_dE q m_b n_c  for m_b in P_{k-1}.
  MatrixXd rx = MatrixXd::Zero(nkm1, nd);
  MatrixXd ry = MatrixXd::Zero(nkm1, nd);
  for (std::size_t e = 0; e < geom.edges.size(); ++e) {
    const auto& tr = ei.traces[e];
    const Point& n = geom.edges[e].normal;
    for (std::size_t g = 0; g < tr.rule.size(); ++g) {
      const VectorXd m = ei.basis.values(tr.rule.points[g]).head(nkm1);
      const double w = tr.rule.weights[g];
      rx.noalias() += (w * n.x()) * m * tr.values.row(ix(g));
      ry.noalias() += (w * n.y()) * m * tr.values.row(ix(g));
    }
  }
  if (ei.k >= 2) {
    const ScaledMonomialBasis lower(geom.centroid, geom.diameter, ei.k - 1);
    const MatrixXd dx = lower.derivative_x();  // n_{k-2} x n_{k-1}
    const MatrixXd dy = lower.derivative_y();
    for (std::size_t c = 0; c < ei.nkm2(); ++c) {
      const auto col = ix(ei.layout.internal_dof(c));
      for (Index b = 0; b < nkm1; ++b) {
        rx(b, col) -= geom.area * dx(ix(c), b);
        ry(b, col) -= geom.area * dy(ix(c), b);
      }
    }
  }
  const auto ldlt = ei.H.topLeftCorner(nkm1, nkm1).ldlt();
  return {ldlt.solve(rx), ldlt.solve(ry)};
}

}  // namespace

Eigen::VectorXd interpolate_dofs(const ElementGeometry& geom, int k, const ScalarField& v, int exactness) {
  if (exactness < 0) exactness = 2 * k + 14;
  const DofLayout layout = dof_layout(geom, k);
  VectorXd dofs = VectorXd::Zero(ix(layout.size()));
  for (std::size_t i = 0; i < geom.num_vertices(); ++i) dofs(ix(layout.vertex_dof(i))) = v(geom.vertices[i]);
  if (k >= 2) {
    for (std::size_t e = 0; e < geom.edges.size(); ++e) {
      const auto& edge = geom.edges[e];
      const QuadratureRule rule = edge_quadrature(edge.start, edge.end, exactness);
      const EdgeBasis along(edge.start, edge.end, k - 2);
      for (std::size_t g = 0; g < rule.size(); ++g) {
        const VectorXd sj = along.values(edge_sign(edge) * along.coordinate(rule.points[g]));
        const double w = rule.weights[g] * v(rule.points[g]) / edge.length;
        for (std::size_t j = 0; j < layout.edge_dofs_per_edge(); ++j) dofs(ix(layout.edge_dof(e, j))) += w * sj(ix(j));
      }
    }
    const ScaledMonomialBasis basis(geom, k - 2);
    const QuadratureRule rule = polygon_quadrature(geom, exactness);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const VectorXd m = basis.values(rule.points[q]);
      const double w = rule.weights[q] * v(rule.points[q]) / geom.area;
      for (std::size_t a = 0; a < layout.internal_dofs(); ++a) dofs(ix(layout.internal_dof(a))) += w * m(ix(a));
    }
  }
  return dofs;
}

Eigen::MatrixXd basis_dofs(const ElementGeometry& geom, int k) {
  const ElementIntegrals ei(geom, k);
  return basis_dofs_impl(geom, ei);
}

Eigen::MatrixXd pi_nabla(const ElementGeometry& geom, int k, const DofLayout& layout) {
  if (layout.k != k || layout.num_vertices != geom.num_vertices())
    throw std::invalid_argument("pi_nabla: layout does not match element");
  const ElementIntegrals ei(geom, k);
  return pi_nabla_impl(geom, ei);
}

Eigen::MatrixXd pi0_k(const ElementGeometry& geom, int k, const DofLayout& layout, const Eigen::MatrixXd& pinabla) {
  if (layout.k != k || layout.num_vertices != geom.num_vertices())
    throw std::invalid_argument("pi0_k: layout does not match element");
  const ElementIntegrals ei(geom, k);
  return pi0_k_impl(geom, ei, pinabla);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> pi0_grad(const ElementGeometry& geom, int k, const DofLayout& layout) {
  if (layout.k != k || layout.num_vertices != geom.num_vertices())
    throw std::invalid_argument("pi0_grad: layout does not match element");
  const ElementIntegrals ei(geom, k);
  return pi0_grad_impl(geom, ei);
}

ProjectorSet compute_projectors(const ElementGeometry& geom, int k) {
  const ElementIntegrals ei(geom, k);
  ProjectorSet p;
  p.pi_nabla = pi_nabla_impl(geom, ei, &p.G, &p.B, &p.grad_nabla_x, &p.grad_nabla_y);
  p.pi0_k = pi0_k_impl(geom, ei, p.pi_nabla);
  // Moments of q against P_{k-1} are those of Pi0_k q.
  const auto nkm1 = ix(ei.nkm1());
  p.pi0_km1 = ei.H.topLeftCorner(nkm1, nkm1).ldlt().solve(ei.H.topRows(nkm1) * p.pi0_k);
  std::tie(p.pi0_grad_x, p.pi0_grad_y) = pi0_grad_impl(geom, ei);
  p.D = basis_dofs_impl(geom, ei);
  return p;
}

Eigen::MatrixXd stab_matrix(const ElementGeometry& geom, int k, const DofLayout& layout,
                            const Eigen::MatrixXd& pinabla, const Eigen::MatrixXd& D, const Coefficients& coeffs,
                            int quad_boost) {
  const QuadratureRule rule = polygon_quadrature(geom, 2 * k + quad_boost);
  double trace = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) trace += rule.weights[q] * coeffs.kappa(rule.points[q]).trace();
  const double sigma = 0.5 * trace / geom.area;
  const auto nd = ix(layout.size());
  const MatrixXd residual = MatrixXd::Identity(nd, nd) - D * pinabla;
  MatrixXd s = sigma * residual.transpose() * residual;
  return 0.5 * (s + s.transpose());
}

LocalSystem local_system(const ElementGeometry& geom, int k, const ProjectorSet& proj, const Coefficients& coeffs,
                         ConsistencyMode mode, int quad_boost) {
  const ScaledMonomialBasis basis(geom.centroid, geom.diameter, k - 1);
  const auto n = ix(basis.size());
  const QuadratureRule rule = polygon_quadrature(geom, 2 * k + quad_boost);

  // Coefficient-weighted P_{k-1} mass matrices, one pass over the rule.
  MatrixXd kxx = MatrixXd::Zero(n, n), kxy = MatrixXd::Zero(n, n), kyy = MatrixXd::Zero(n, n);
  MatrixXd bx = MatrixXd::Zero(n, n), by = MatrixXd::Zero(n, n), gam = MatrixXd::Zero(n, n);
  VectorXd load = VectorXd::Zero(n);
  double trace = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point& x = rule.points[q];
    const double w = rule.weights[q];
    const VectorXd m = basis.values(x);
    const MatrixXd mm = m * m.transpose();
    const Eigen::Matrix2d kap = coeffs.kappa(x);
    trace += w * kap.trace();
    kxx.noalias() += (w * kap(0, 0)) * mm;
    kxy.noalias() += (w * 0.5 * (kap(0, 1) + kap(1, 0))) * mm;
    kyy.noalias() += (w * kap(1, 1)) * mm;
    if (coeffs.b) {
      const Point bv = coeffs.b(x);
      bx.noalias() += (w * bv.x()) * mm;
      by.noalias() += (w * bv.y()) * mm;
    }
    if (coeffs.gamma) gam.noalias() += (w * coeffs.gamma(x)) * mm;
    if (coeffs.f) load.noalias() += (w * coeffs.f(x)) * m;
  }

  MatrixXd gx = proj.pi0_grad_x;
  MatrixXd gy = proj.pi0_grad_y;
  if (mode == ConsistencyMode::grad_pinabla) {
    gx = proj.grad_nabla_x;
    gy = proj.grad_nabla_y;
  }

  LocalSystem sys;
  sys.mode = mode;
  MatrixXd cons = gx.transpose() * kxx * gx + gx.transpose() * kxy * gy + gy.transpose() * kxy * gx +
                  gy.transpose() * kyy * gy;
  sys.consistency = 0.5 * (cons + cons.transpose());

  const auto nd = ix(proj.pi_nabla.cols());
  const double sigma = 0.5 * trace / geom.area;
  const MatrixXd residual = MatrixXd::Identity(nd, nd) - proj.D * proj.pi_nabla;
  const MatrixXd s = sigma * residual.transpose() * residual;
  sys.S = 0.5 * (s + s.transpose());
  sys.Ah = sys.consistency + sys.S;

  // b_h(p, q) = -int [Pi0 p] [b . Pi0 grad q]; row = test q, column = trial p.
  const MatrixXd& p0 = proj.pi0_km1;
  if (coeffs.b)
    sys.Bh = -(proj.pi0_grad_x.transpose() * bx * p0 + proj.pi0_grad_y.transpose() * by * p0);
  else
    sys.Bh = MatrixXd::Zero(nd, nd);
  if (coeffs.gamma) {
    const MatrixXd c = p0.transpose() * gam * p0;
    sys.Ch = 0.5 * (c + c.transpose());
  } else {
    sys.Ch = MatrixXd::Zero(nd, nd);
  }
  sys.f_loc = p0.transpose() * load;
  return sys;
}

LocalSystem local_system(const ElementGeometry& geom, int k, const Coefficients& coeffs, ConsistencyMode mode,
                         int quad_boost) {
  return local_system(geom, k, compute_projectors(geom, k), coeffs, mode, quad_boost);
}

}  // namespace vemlab
