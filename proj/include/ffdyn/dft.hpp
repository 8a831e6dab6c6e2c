#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ffdyn/grid.hpp"

namespace ffdyn {

struct SpectralSnapshot {
  FrequencyGrid grid;
  std::vector<std::complex<double>> values;
  double time = 0.0;
};

/// Time-ordered spectra sharing one frequency grid.
struct SpectralTrace {
  std::vector<SpectralSnapshot> snapshots;

  const FrequencyGrid& grid() const { return snapshots.front().grid; }
  std::vector<double> times() const;
};

/// Scaled DFT approximating the continuous transform
///   H(xi) = integral of h(x) exp(-2 pi i x xi) dx
/// over one period: H_j = dx * sum_i h_i exp(-2 pi i x_i f_j). With this
/// scaling Parseval reads sum |h|^2 dx = sum |H|^2 dxi.
SpectralSnapshot dft_forward(const SampleGrid& grid, std::span<const double> signal);

/// Inverse of dft_forward. The imaginary residue, rounding-level for spectra
/// of real signals, is discarded.
std::vector<double> dft_inverse(const SampleGrid& grid, const SpectralSnapshot& spectrum);

/// max_j |v(-xi_j) - conj(v(xi_j))| / max_j |v_j| over bins with a mirror.
double hermitian_asymmetry(const SpectralSnapshot& snapshot);

}  // namespace ffdyn
