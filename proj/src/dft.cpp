#include "ffdyn/dft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ffdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<double> SpectralTrace::times() const {
  std::vector<double> t(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) t[i] = snapshots[i].time;
  return t;
}

SpectralSnapshot dft_forward(const SampleGrid& grid, std::span<const double> signal) {
  if (signal.size() != grid.n)
    throw std::invalid_argument("dft_forward: signal length must equal grid n");
  SpectralSnapshot out;
  out.grid = frequency_grid_for(grid);
  out.values.resize(out.grid.size());
  const double dx = grid.spacing();
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    const double f = out.grid.freqs[j];
    // Phase recurrence along the equispaced grid.
    const std::complex<double> rot{std::cos(-kTwoPi * dx * f), std::sin(-kTwoPi * dx * f)};
    std::complex<double> phase{std::cos(-kTwoPi * grid.a * f), std::sin(-kTwoPi * grid.a * f)};
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < grid.n; ++i) {
      acc += signal[i] * phase;
      phase *= rot;
    }
    out.values[j] = dx * acc;
  }
  return out;
}

std::vector<double> dft_inverse(const SampleGrid& grid, const SpectralSnapshot& spectrum) {
  if (spectrum.values.size() != grid.n)
    throw std::invalid_argument("dft_inverse: spectrum size must equal grid n");
  const double dxi = spectrum.grid.resolution;
  std::vector<double> out(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.points[i];
    const double step = kTwoPi * x * dxi;
    const std::complex<double> rot{std::cos(step), std::sin(step)};
    const double f0 = spectrum.grid.freqs.front();
    std::complex<double> phase{std::cos(kTwoPi * x * f0), std::sin(kTwoPi * x * f0)};
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < spectrum.values.size(); ++j) {
      acc += spectrum.values[j] * phase;
      phase *= rot;
    }
    out[i] = dxi * acc.real();
  }
  return out;
}

double hermitian_asymmetry(const SpectralSnapshot& snapshot) {
  double scale = 0.0;
  for (const auto& v : snapshot.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < snapshot.values.size(); ++j) {
    const std::size_t mirror = snapshot.grid.index_of(-snapshot.grid.freqs[j]);
    if (mirror == FrequencyGrid::npos) continue;
    worst = std::max(worst,
                     std::abs(snapshot.values[mirror] - std::conj(snapshot.values[j])));
  }
  return worst / scale;
}

}  // namespace ffdyn
