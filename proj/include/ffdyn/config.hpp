#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ffdyn/distribution.hpp"
#include "ffdyn/ensemble.hpp"
#include "ffdyn/network.hpp"

namespace ffdyn {

enum class Preset {
  kKappaSweep,    // per-frequency learning rates for a list of densities
  kFemVsNn,       // ensemble-mean spectra next to the FEM evolution
  kFrozenCheck,   // frozen-weights runs against the closed-form decay
  kMultilayer,    // depth >= 3 learning rates
  kRobustnessM,   // sweep over width m and depth
  kCustom,
};

Preset preset_from_string(const std::string& s);
std::string preset_to_string(Preset p);

struct FemConfig {
  double a = -60.0;
  double b = 60.0;
  double h = 0.5;
  double dt = 0.1;
  std::size_t steps = 5000;
  std::size_t snapshot_every = 500;
  double sigma_a = 0.031622776601683791;
  /// Initial condition: "target" (minus the target spectrum on the sample
  /// grid), "gaussian:<s>", or "bumps:<center>,<s>".
  std::string initial = "target";
};

struct ExperimentConfig {
  Preset preset = Preset::kCustom;
  TrainConfig train;
  FemConfig fem;
  std::vector<DistributionSpec> dists;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "out";
  KappaMode kappa_mode = KappaMode::kPerSeedThenAverage;
  double kappa_window_fraction = 0.1;
  double amplitude_floor = 1e-8;
  bool run_nn = true;
  bool run_fem = false;
  std::vector<std::size_t> m_list;      // robustness sweep
  std::vector<std::size_t> depth_list;  // robustness sweep

  void validate() const;
};

/// Preset defaults before file overrides are applied.
ExperimentConfig config_for_preset(Preset preset);

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Normalized echo of the full config; re-parseable, 17-digit numerics.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace ffdyn
