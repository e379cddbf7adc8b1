#pragma once

#include "vemlab/mesh_gen.hpp"
#include "vemlab/postprocess.hpp"
#include "vemlab/problem.hpp"
#include "vemlab/vem_local.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vemlab {

struct ExperimentConfig {
  int k = 1;
  std::vector<MeshFamily> families{MeshFamily::square, MeshFamily::concave, MeshFamily::lloyd0,
                                   MeshFamily::lloyd100};
  std::vector<std::size_t> sizes{25, 100, 400, 1600};
  ConsistencyMode mode = ConsistencyMode::standard;
  std::uint64_t seed = 1;
  int quad_boost = 2;
  GradientSurrogate h1_surrogate = GradientSurrogate::pi0_grad;
  std::filesystem::path output;

  /// Throws std::invalid_argument on k outside 1..4, empty or unsorted sizes.
  void validate() const;
};

struct StudyResult {
  MeshFamily family;
  int k;
  ConsistencyMode mode;
  ConvergenceReport report;
};

/// Solves the problem on one mesh and measures the errors. Solver failures
/// are returned as a failed record.
ErrorRecord run_single(const PolyMesh& mesh, int k, ConsistencyMode mode, const TestProblem& problem,
                       const ErrorNorms& reference, int quad_boost = 2,
                       GradientSurrogate surrogate = GradientSurrogate::pi0_grad);

std::vector<StudyResult> run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// CSV with one row per mesh and one "<family>_fit" row per study, plus a
/// whitespace-separated log-log data file per study next to `path`.
void emit_report(const std::vector<StudyResult>& results, const std::filesystem::path& path);
std::string report_csv(const std::vector<StudyResult>& results);

}  // namespace vemlab
