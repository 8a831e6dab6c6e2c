#pragma once

#include <cstdint>
#include <vector>

#include "ffdyn/dft.hpp"

namespace ffdyn {

/// Per-frequency learning rate: minus the least-squares slope of log |u(xi, t)|
/// (natural logarithm) against t over an early-time window.
struct KappaProfile {
  FrequencyGrid grid;
  std::vector<double> kappa;
  std::vector<double> fit_r2;
  std::vector<std::uint8_t> valid;

  std::size_t valid_count() const;
};

/// window = number of leading snapshots entering the fit (>= 2). Frequencies
/// whose initial amplitude is below amplitude_floor (or that hit exact zeros
/// inside the window) are masked invalid. Throws if every bin is masked.
KappaProfile estimate_kappa(const SpectralTrace& trace, std::size_t window,
                            double amplitude_floor = 1e-8);

/// Snapshot count covering the first `fraction` of the trace's time span,
/// clamped to [2, #snapshots].
std::size_t default_fit_window(const SpectralTrace& trace, double fraction = 0.1);

}  // namespace ffdyn
