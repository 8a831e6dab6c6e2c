#pragma once

#include "ffdyn/dft.hpp"
#include "ffdyn/network.hpp"

namespace ffdyn {

/// Residual spectra recorded along a training run. Snapshot 0 is the
/// initialization residual; time stamps are iteration * step_size * time_scale.
struct ResidualTrace {
  SpectralTrace spectra;
  std::vector<std::size_t> iterations;
  double final_risk = 0.0;
};

/// Full-batch gradient descent on the empirical risk. Deterministic for a
/// fixed config (including seed); throws on non-finite risk, naming the
/// iteration.
ResidualTrace train(const TrainConfig& cfg);

}  // namespace ffdyn
