#pragma once

#include <cstdint>
#include <vector>

#include "ffdyn/dft.hpp"
#include "ffdyn/kappa.hpp"

namespace ffdyn {

/// How the ensemble's representative learning-rate profile is formed:
/// per-seed fits averaged pointwise, or one fit on the complex-mean trace.
enum class KappaMode { kPerSeedThenAverage, kAverageThenFit };

struct EnsembleResult {
  std::vector<SpectralSnapshot> mean_spectrum;  // complex mean per snapshot time
  std::vector<KappaProfile> per_seed_kappa;
  KappaProfile mean_kappa;
  std::vector<std::uint64_t> seeds;

  SpectralTrace mean_trace() const;
};

/// Aggregates traces that share one grid and snapshot schedule. Results are
/// accumulated in seed order, so output is independent of how the traces
/// were produced. window = 0 selects the default early-time window.
EnsembleResult ensemble_aggregate(const std::vector<SpectralTrace>& traces,
                                  const std::vector<std::uint64_t>& seeds,
                                  KappaMode mode = KappaMode::kPerSeedThenAverage,
                                  std::size_t window = 0,
                                  double amplitude_floor = 1e-8);

}  // namespace ffdyn
