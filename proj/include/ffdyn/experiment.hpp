#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ffdyn/config.hpp"

namespace ffdyn {

struct RunArtifact {
  std::string name;
  std::filesystem::path path;
  std::uint64_t checksum = 0;
};

struct RunResult {
  std::filesystem::path dir;
  std::vector<RunArtifact> artifacts;
};

/// Worker threads for per-seed fan-out: FFDYN_THREADS when set, else the
/// hardware core count. Outputs never depend on this value.
unsigned worker_thread_count();

/// Executes the configured experiment: training ensembles and/or FEM
/// evolutions, aggregation, CSV artifacts, figures, and a manifest written
/// last. Partial artifacts plus FAILED.txt are left behind on error.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Build the FEM evolution configured by cfg for one density (no output files).
SpectralTrace run_fem_model(const ExperimentConfig& cfg, const DistributionSpec& dist);

/// Regenerate the figures from the CSVs in a completed result directory.
std::vector<std::filesystem::path> render_plots(const std::filesystem::path& dir);

}  // namespace ffdyn
