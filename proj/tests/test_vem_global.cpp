#include "oracles.hpp"
#include "vemlab/postprocess.hpp"
#include "vemlab/problem.hpp"
#include "vemlab/vem_global.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <set>

using namespace vemlab;

namespace {

// p = sum c_ab x^a y^b over a + b <= k, with its second derivatives.
struct GlobalPoly {
  int k;
  std::vector<std::array<double, 3>> terms;  // (a, b, c)

  GlobalPoly(int degree, unsigned salt) : k(degree) {
    for (int d = 0; d <= k; ++d)
      for (int a = d; a >= 0; --a) {
        const double c = std::sin(1.7 * (a + 1) + 0.9 * (d - a) + 0.37 * salt);
        terms.push_back({double(a), double(d - a), c});
      }
  }
  double deriv(const Point& x, int dx, int dy) const {
    double s = 0.0;
    for (const auto& [a, b, c] : terms) {
      if (a < dx || b < dy) continue;
      double f = c;
      for (int i = 0; i < dx; ++i) f *= a - i;
      for (int i = 0; i < dy; ++i) f *= b - i;
      s += f * std::pow(x.x(), a - dx) * std::pow(x.y(), b - dy);
    }
    return s;
  }
  double operator()(const Point& x) const { return deriv(x, 0, 0); }
};

Coefficients constant_anisotropic(const Eigen::Matrix2d& K, const GlobalPoly& p) {
  Coefficients c;
  c.kappa = [K](const Point&) { return K; };
  c.kappa0 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(K).eigenvalues().minCoeff();
  c.f = [K, p](const Point& x) {
    return -(K(0, 0) * p.deriv(x, 2, 0) + 2.0 * K(0, 1) * p.deriv(x, 1, 1) + K(1, 1) * p.deriv(x, 0, 2));
  };
  return c;
}

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("DoF counts on a 5x5 square mesh") {
  const PolyMesh m = square_mesh(5);
  const DofMap d1 = build_dofmap(m, 1);
  CHECK(d1.size() == 36);
  CHECK(d1.num_boundary() == 20);
  const DofMap d2 = build_dofmap(m, 2);
  CHECK(d2.num_edges == 60);
  CHECK(d2.size() == 121);
  CHECK(d2.num_boundary() == 40);
  const DofMap d4 = build_dofmap(m, 4);
  CHECK(d4.size() == 36 + 60 * 3 + 25 * 6);
  for (const auto& cd : d4.cell_dofs) CHECK(cd.size() == 4 * 4 + 6);
}

TEST_CASE("shared edges get one consistent value per global DoF") {
  const auto v = [](const Point& x) { return std::exp(x.x()) * std::cos(2.0 * x.y()) + x.x() * x.y() * x.y(); };
  for (const PolyMesh& m : {concave_mesh(3), voronoi_from_seeds(random_seeds(40, 5))})
    for (int k = 1; k <= 4; ++k) {
      const DofMap dm = build_dofmap(m, k);
      Eigen::VectorXd acc = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dm.size()), std::nan(""));
      double worst = 0.0;
      for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const Eigen::VectorXd local = interpolate_dofs(element_geometry(m, c), k, v);
        for (std::size_t i = 0; i < dm.cell_dofs[c].size(); ++i) {
          const auto gi = static_cast<Eigen::Index>(dm.cell_dofs[c][i]);
          if (std::isnan(acc(gi)))
            acc(gi) = local(static_cast<Eigen::Index>(i));
          else
            worst = std::max(worst, std::abs(acc(gi) - local(static_cast<Eigen::Index>(i))));
        }
      }
      CHECK(worst < 1e-12);
      CHECK_FALSE(acc.hasNaN());
      const Eigen::VectorXd global = global_interpolant(m, dm, v);
      CHECK((global - acc).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("pure diffusion matrix: symmetry, constant kernel, locality") {
  const PolyMesh m = voronoi_from_seeds(random_seeds(30, 2));
  for (int k = 1; k <= 3; ++k) {
    const SparseSystem sys = assemble(m, k, Coefficients::scalar(1.0), ConsistencyMode::standard);
    const Eigen::MatrixXd A = dense(sys.full_matrix);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12 * A.cwiseAbs().maxCoeff());
    const Eigen::VectorXd one = global_interpolant(m, sys.dofmap, [](const Point&) { return 1.0; });
    CHECK((A * one).cwiseAbs().maxCoeff() < 1e-11 * A.cwiseAbs().maxCoeff());
    // Reduced matrix has only interior DoFs.
    CHECK(static_cast<std::size_t>(sys.matrix.rows()) == sys.dofmap.size() - sys.dofmap.num_boundary());

    std::set<std::pair<std::size_t, std::size_t>> allowed;
    for (const auto& cd : sys.dofmap.cell_dofs)
      for (auto i : cd)
        for (auto j : cd) allowed.insert({i, j});
    std::size_t stray = 0;
    for (Eigen::Index col = 0; col < sys.full_matrix.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(sys.full_matrix, col); it; ++it)
        if (it.value() != 0.0 && !allowed.count({std::size_t(it.row()), std::size_t(it.col())})) ++stray;
    CHECK(stray == 0);
  }
}

TEST_CASE("homogeneous Dirichlet data leaves the rhs unchanged") {
  const PolyMesh m = square_mesh(4);
  SparseSystem sys = assemble(m, 2, builtin_problem().coeffs, ConsistencyMode::standard);
  const Eigen::VectorXd before = sys.rhs;
  apply_dirichlet(sys, [](const Point&) { return 0.0; }, m, 2);
  CHECK((sys.rhs - before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant solution is reproduced with reaction present") {
  const PolyMesh m = concave_mesh(4);
  const TestProblem prob = builtin_problem();
  for (int k = 1; k <= 3; ++k) {
    Coefficients c = prob.coeffs;
    c.b = {};
    c.f = [g = prob.coeffs.gamma](const Point& x) { return 2.0 * g(x); };
    SparseSystem sys = assemble(m, k, c, ConsistencyMode::standard);
    apply_dirichlet(sys, [](const Point&) { return 2.0; }, m, k);
    const Eigen::VectorXd sol = solve(sys);
    const Eigen::VectorXd ref = global_interpolant(m, sys.dofmap, [](const Point&) { return 2.0; });
    CHECK((sol - ref).cwiseAbs().maxCoeff() < 1e-10);
    const CellPolynomials proj = project_solution(m, sys.dofmap, sol);
    for (std::size_t cell = 0; cell < m.num_cells(); ++cell) {
      CHECK(proj.value[cell](0) == doctest::Approx(2.0).epsilon(1e-10));
      CHECK(proj.value[cell].tail(proj.value[cell].size() - 1).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK(point_error(m, proj, [](const Point&) { return 2.0; }, kMaxPoint).relative < 1e-12);
  }
}

TEST_CASE("boundary lifting carries the exact solution") {
  const PolyMesh m = square_mesh(5);
  const TestProblem prob = builtin_problem();
  SparseSystem sys = assemble(m, 1, prob.coeffs, ConsistencyMode::standard);
  apply_dirichlet(sys, prob.exact, m, 1);
  std::size_t corner = m.num_vertices();
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    if ((m.vertices[v] - Point(1, 1)).norm() < 1e-14) corner = v;
  REQUIRE(corner < m.num_vertices());
  CHECK(sys.lifting(static_cast<Eigen::Index>(corner)) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("single square: nothing to solve") {
  const PolyMesh m = square_mesh(1);
  SparseSystem sys = assemble(m, 1, Coefficients::scalar(1.0), ConsistencyMode::standard);
  CHECK(sys.matrix.rows() == 0);
  apply_dirichlet(sys, [](const Point& x) { return x.x() + 3.0 * x.y(); }, m, 1);
  const Eigen::VectorXd sol = solve(sys);
  CHECK((sol - sys.lifting).norm() == 0.0);
}

TEST_CASE("patch test p = x") {
  for (const PolyMesh& m : {square_mesh(6), concave_mesh(4), voronoi_from_seeds(random_seeds(50, 3))}) {
    SparseSystem sys = assemble(m, 1, Coefficients::scalar(1.0), ConsistencyMode::standard);
    const auto p = [](const Point& x) { return x.x(); };
    apply_dirichlet(sys, p, m, 1);
    SolveInfo info;
    const Eigen::VectorXd sol = solve(sys, &info);
    CHECK(info.relative_residual < 1e-10);
    CHECK((sol - global_interpolant(m, sys.dofmap, p)).cwiseAbs().maxCoeff() < 1e-11);
    const CellPolynomials proj = project_solution(m, sys.dofmap, sol);
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      // x = x_E + h_E X in scaled monomials.
      CHECK(proj.value[c](0) == doctest::Approx(proj.bases[c].centre().x()).epsilon(1e-10));
      CHECK(proj.value[c](1) == doctest::Approx(proj.bases[c].scale()).epsilon(1e-10));
      CHECK(std::abs(proj.value[c](2)) < 1e-10);
    }
  }
}

TEST_CASE("patch tests with constant anisotropic diffusion, k = 1..4") {
  Eigen::Matrix2d K;
  K << 2.0, 0.6, 0.6, 1.3;
  for (int k = 1; k <= 4; ++k) {
    const GlobalPoly p(k, static_cast<unsigned>(k));
    const auto exact = [p](const Point& x) { return p(x); };
    for (const PolyMesh& m : {square_mesh(4), concave_mesh(3), lloyd_relax(random_seeds(30, 7), 10).mesh})
      for (auto mode : {ConsistencyMode::standard, ConsistencyMode::grad_pinabla}) {
        // grad PiNabla is only exact when kappa grad p is itself a gradient.
        const Eigen::Matrix2d Km = mode == ConsistencyMode::standard ? K : Eigen::Matrix2d(1.7 * Eigen::Matrix2d::Identity());
        SparseSystem sys = assemble(m, k, constant_anisotropic(Km, p), mode);
        apply_dirichlet(sys, exact, m, k);
        const Eigen::VectorXd sol = solve(sys);
        CHECK((sol - global_interpolant(m, sys.dofmap, exact)).cwiseAbs().maxCoeff() < 1e-10);
      }
  }
}

TEST_CASE("k = 2 single square with a linear solution") {
  const PolyMesh m = square_mesh(1);
  const auto p = [](const Point& x) { return 1.0 + 2.0 * x.x() - x.y(); };
  SparseSystem sys = assemble(m, 2, Coefficients::scalar(1.0), ConsistencyMode::standard);
  CHECK(sys.matrix.rows() == 1);  // the one internal moment
  apply_dirichlet(sys, p, m, 2);
  const Eigen::VectorXd sol = solve(sys);
  CHECK(sol(static_cast<Eigen::Index>(sys.dofmap.internal_dof(0, 0))) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("model problem, k = 1: refinement reduces the L2 error") {
  const TestProblem prob = builtin_problem();
  double prev = 0.0;
  for (std::size_t n : {10u, 20u}) {
    const PolyMesh m = square_mesh(n);
    SparseSystem sys = assemble(m, 1, prob.coeffs, ConsistencyMode::standard);
    apply_dirichlet(sys, prob.exact, m, 1);
    const CellPolynomials proj = project_solution(m, sys.dofmap, solve(sys));
    const double l2 = error_norms(m, proj, prob.exact, prob.grad_exact).l2;
    if (n == 20) CHECK(l2 < prev);
    prev = l2;
  }
}

TEST_CASE("assembly is linear in f and deterministic") {
  const PolyMesh m = voronoi_from_seeds(random_seeds(25, 12));
  const auto f1 = [](const Point& x) { return std::sin(x.x()) + x.y(); };
  const auto f2 = [](const Point& x) { return x.x() * x.x() * x.y(); };
  Coefficients c = builtin_problem().coeffs;
  c.f = f1;
  const SparseSystem a = assemble(m, 3, c, ConsistencyMode::standard);
  c.f = f2;
  const SparseSystem b = assemble(m, 3, c, ConsistencyMode::standard);
  c.f = [&](const Point& x) { return f1(x) + f2(x); };
  const SparseSystem s = assemble(m, 3, c, ConsistencyMode::standard);
  CHECK((s.full_rhs - a.full_rhs - b.full_rhs).cwiseAbs().maxCoeff() < 1e-14);

  c.f = f1;
  const SparseSystem a2 = assemble(m, 3, c, ConsistencyMode::standard);
  const Eigen::MatrixXd da = dense(a.full_matrix), da2 = dense(a2.full_matrix);
  CHECK((da - da2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.full_rhs - a2.full_rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("singular systems are reported") {
  Coefficients c;
  c.kappa = [](const Point&) { return Eigen::Matrix2d::Zero().eval(); };
  c.kappa0 = 0.0;
  const PolyMesh m = square_mesh(3);
  SparseSystem sys = assemble(m, 1, c, ConsistencyMode::standard);
  CHECK_THROWS_AS(solve(sys), SolveError);
}
