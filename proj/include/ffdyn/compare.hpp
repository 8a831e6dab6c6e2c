#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ffdyn/distribution.hpp"
#include "ffdyn/ensemble.hpp"

namespace ffdyn {

/// Quantitative agreement between an ensemble of network runs and a model
/// trace (FEM evolution or closed form) of the same residual spectrum.
struct ComparisonReport {
  double time_scale = 1.0;  ///< model time per unit of network time
  std::vector<double> nn_times;
  std::vector<double> rel_l2;  ///< per network snapshot, |mean u| curves
  double spearman_kappa_rho = 0.0;
  double band_lo = 0.0;  ///< |xi| range actually used for the correlation
  double band_hi = 0.0;
  std::size_t band_bins = 0;
};

/// Fits one global time-scale factor minimizing the summed squared distance
/// between log-magnitude curves, then reports per-snapshot relative L2
/// distances and the Spearman correlation of the ensemble's kappa profile
/// with rho_w over the valid band (|xi| <= band_limit). The model trace is
/// resampled onto the network grid by linear interpolation when needed.
ComparisonReport compare(const EnsembleResult& nn, const SpectralTrace& model,
                         const DistributionSpec& dist,
                         double band_limit = std::numeric_limits<double>::infinity(),
                         double amplitude_floor = 1e-8);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace ffdyn
