#include "vemlab/experiment.hpp"

#include "vemlab/vem_global.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vemlab {

void ExperimentConfig::validate() const {
  if (k < 1 || k > 4) throw std::invalid_argument("k must be in 1..4");
  if (families.empty()) throw std::invalid_argument("at least one mesh family is required");
  if (sizes.empty()) throw std::invalid_argument("at least one mesh size is required");
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw std::invalid_argument("sizes must be sorted ascending");
  if (quad_boost < 0) throw std::invalid_argument("quad_boost must be >= 0");
}

ErrorRecord run_single(const PolyMesh& mesh, int k, ConsistencyMode mode, const TestProblem& problem,
                       const ErrorNorms& reference, int quad_boost, GradientSurrogate surrogate) {
  ErrorRecord rec;
  rec.n_cells = mesh.num_cells();
  rec.h_max = max_diameter(mesh);
  try {
    SparseSystem sys = assemble(mesh, k, problem.coeffs, mode, {quad_boost});
    rec.dofs = sys.dofmap.size();
    apply_dirichlet(sys, problem.exact, mesh, k);
    const Eigen::VectorXd dofs = solve(sys);
    const CellPolynomials proj = project_solution(mesh, sys.dofmap, dofs);
    const ErrorNorms err = error_norms(mesh, proj, problem.exact, problem.grad_exact, surrogate);
    rec.err_L2_rel = err.l2 / reference.l2;
    rec.err_H1_rel = err.h1 / reference.h1;
    rec.err_point_rel = point_error(mesh, proj, problem.exact, kMaxPoint).relative;
  } catch (const SolveError& e) {
    rec.failed = true;
    rec.message = e.what();
  }
  return rec;
}

std::vector<StudyResult> run_experiment(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  const TestProblem problem = builtin_problem();
  const ErrorNorms reference = unit_square_norms(problem.exact, problem.grad_exact);
  std::vector<StudyResult> results;
  for (MeshFamily family : config.families) {
    std::vector<ErrorRecord> records;
    for (std::size_t size : config.sizes) {
      GeneratorSpec spec;
      spec.family = family;
      spec.target_cells = size;
      spec.seed = config.seed;
      const PolyMesh mesh = generate_mesh(spec);
      ErrorRecord rec = run_single(mesh, config.k, config.mode, problem, reference, config.quad_boost,
                                   config.h1_surrogate);
      if (log) {
        *log << to_string(family) << " k=" << config.k << ' ' << to_string(config.mode) << " cells=" << rec.n_cells
             << " dofs=" << rec.dofs;
        if (rec.failed)
          *log << " FAILED: " << rec.message << '\n';
        else
          *log << " L2=" << rec.err_L2_rel << " H1=" << rec.err_H1_rel << " pt=" << rec.err_point_rel << '\n';
      }
      records.push_back(std::move(rec));
    }
    results.push_back({family, config.k, config.mode, convergence_rates(std::move(records))});
  }
  return results;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string study_label(const StudyResult& r) {
  return std::string(to_string(r.family)) + "_k" + std::to_string(r.k) + "_" + std::string(to_string(r.mode));
}

}  // namespace

std::string report_csv(const std::vector<StudyResult>& results) {
  std::ostringstream out;
  out << "family,k,mode,n_cells,n_dofs,h_max,err_L2_rel,err_H1_rel,err_point_rel,slope_L2_pairwise,"
         "slope_H1_pairwise\n";
  for (const auto& r : results) {
    const auto& rep = r.report;
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
      const auto& rec = rep.records[i];
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out << to_string(r.family) << ',' << r.k << ',' << to_string(r.mode) << ',' << rec.n_cells << ','
          << rec.dofs << ',' << num(rec.h_max) << ',' << num(rec.failed ? nan : rec.err_L2_rel) << ','
          << num(rec.failed ? nan : rec.err_H1_rel) << ',' << num(rec.failed ? nan : rec.err_point_rel) << ','
          << opt(rep.pairwise_L2[i]) << ',' << opt(rep.pairwise_H1[i]) << '\n';
    }
  }
  for (const auto& r : results)
    out << to_string(r.family) << "_fit," << r.k << ',' << to_string(r.mode) << ",,,,,,," << opt(r.report.slope_L2)
        << ',' << opt(r.report.slope_H1) << '\n';
  return out.str();
}

void emit_report(const std::vector<StudyResult>& results, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report " + path.string());
    out << report_csv(results);
    if (!out) throw std::runtime_error("write failure on " + path.string());
  }
  for (const auto& r : results) {
    std::filesystem::path dat = path;
    dat.replace_filename(path.stem().string() + "_" + study_label(r) + ".dat");
    std::ofstream out(dat, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write data file " + dat.string());
    out << "# h_max err_L2_rel err_H1_rel err_point_rel n_cells n_dofs\n";
    for (const auto& rec : r.report.records) {
      if (rec.failed) continue;
      out << num(rec.h_max) << ' ' << num(rec.err_L2_rel) << ' ' << num(rec.err_H1_rel) << ' '
          << num(rec.err_point_rel) << ' ' << rec.n_cells << ' ' << rec.dofs << '\n';
    }
  }
}

}  // namespace vemlab
