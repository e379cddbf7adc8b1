// vemlab: mesh generation and convergence studies for the virtual element
// method on polygonal meshes.

#include "vemlab/experiment.hpp"
#include "vemlab/mesh.hpp"
#include "vemlab/mesh_gen.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element convergence studies on polygonal meshes"};
  app.require_subcommand(1);

  // vemlab run
  auto* run = app.add_subcommand("run", "Run a convergence study on the built-in test problem");
  int k = 1;
  std::string families = "square,concave,lloyd0,lloyd100";
  std::string sizes = "25,100,400,1600";
  std::string mode = "standard";
  std::uint64_t seed = 1;
  int quad_boost = 2;
  std::string h1_from = "pi0_grad";
  std::string out = "report.csv";
  run->add_option("--k", k, "Polynomial degree (1..4)")->check(CLI::Range(1, 4));
  run->add_option("--family", families, "Comma-separated families: square, concave, lloyd0, lloyd100");
  run->add_option("--sizes", sizes, "Comma-separated cell counts (squares for square/concave)");
  run->add_option("--mode", mode, "Consistency term: standard or grad_pinabla")
      ->check(CLI::IsMember({"standard", "grad_pinabla"}));
  run->add_option("--seed", seed, "Seed for the Voronoi families");
  run->add_option("--quad-boost", quad_boost, "Extra quadrature degree for variable coefficients");
  run->add_option("--h1-from", h1_from, "Gradient used in the H1 error: pi0_grad or grad_pinabla")
      ->check(CLI::IsMember({"pi0_grad", "grad_pinabla"}));
  run->add_option("--out", out, "CSV report path");

  // vemlab mesh gen / mesh check
  auto* mesh = app.add_subcommand("mesh", "Mesh utilities");
  mesh->require_subcommand(1);
  auto* gen = mesh->add_subcommand("gen", "Generate a mesh of the unit square");
  std::string family = "square";
  std::size_t cells = 100;
  std::uint64_t gen_seed = 1;
  int iters = -1;
  std::string mesh_out = "mesh.json";
  gen->add_option("--family", family, "square, concave, lloyd0 or lloyd100")->required();
  gen->add_option("--cells", cells, "Cell count (squares for square/concave)")->required();
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--iters", iters, "Lloyd iterations (default 0 for lloyd0, 100 for lloyd100)");
  gen->add_option("--out", mesh_out, "Output JSON path")->required();

  auto* check = mesh->add_subcommand("check", "Validate a mesh file and print regularity diagnostics");
  std::string mesh_in;
  check->add_option("path", mesh_in, "Mesh JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      vemlab::ExperimentConfig cfg;
      cfg.k = k;
      cfg.families.clear();
      for (const auto& f : split(families, ',')) cfg.families.push_back(vemlab::parse_family(f));
      cfg.sizes.clear();
      for (const auto& s : split(sizes, ',')) cfg.sizes.push_back(std::stoul(s));
      cfg.mode = vemlab::parse_mode(mode);
      cfg.seed = seed;
      cfg.quad_boost = quad_boost;
      cfg.h1_surrogate =
          h1_from == "pi0_grad" ? vemlab::GradientSurrogate::pi0_grad : vemlab::GradientSurrogate::grad_pinabla;
      cfg.output = out;
      const auto results = vemlab::run_experiment(cfg, &std::cerr);
      vemlab::emit_report(results, cfg.output);
      for (const auto& r : results) {
        std::cout << vemlab::to_string(r.family) << " k=" << r.k << ' ' << vemlab::to_string(r.mode);
        if (r.report.slope_L2) std::cout << "  L2 slope " << *r.report.slope_L2;
        if (r.report.slope_H1) std::cout << "  H1 slope " << *r.report.slope_H1;
        std::cout << '\n';
        for (const auto& w : r.report.warnings) std::cout << "  warning: " << w << '\n';
      }
      std::cout << "wrote " << cfg.output.string() << '\n';
    } else if (*gen) {
      vemlab::GeneratorSpec spec;
      spec.family = vemlab::parse_family(family);
      spec.target_cells = cells;
      spec.seed = gen_seed;
      if (iters >= 0) spec.lloyd_iterations = iters;
      const vemlab::PolyMesh m = vemlab::generate_mesh(spec);
      vemlab::save_mesh(m, mesh_out);
      std::cout << "wrote " << mesh_out << ": " << m.num_cells() << " cells, " << m.num_vertices()
                << " vertices\n";
    } else if (*check) {
      const vemlab::PolyMesh m = vemlab::load_mesh(mesh_in);
      const auto rep = vemlab::regularity_report(m);
      std::cout << m.num_cells() << " cells, " << m.num_vertices() << " vertices, " << m.boundary_edges.size()
                << " boundary edges\n"
                << "min rho " << rep.min_rho << ", min edge ratio " << rep.min_edge_ratio << ", "
                << rep.not_star_shaped.size() << " cells not star-shaped\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
