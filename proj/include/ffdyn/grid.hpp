#pragma once

#include <cstddef>
#include <vector>

namespace ffdyn {

/// Equispaced sample grid on [a, b), endpoint-exclusive:
/// points[i] = a + i*(b-a)/n, spacing (b-a)/n.
struct SampleGrid {
  std::size_t n = 0;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> points;

  double spacing() const { return (b - a) / static_cast<double>(n); }
  double length() const { return b - a; }
};

SampleGrid make_sample_grid(std::size_t n, double a, double b);

/// Two-sided frequency grid in cycles per unit length.
struct FrequencyGrid {
  std::vector<double> freqs;
  double resolution = 0.0;

  std::size_t size() const { return freqs.size(); }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  /// Bin index holding frequency xi (within a relative tolerance), or npos.
  std::size_t index_of(double xi) const;
};

/// DFT bin layout for a sample grid: resolution 1/(b-a), frequencies
/// j/(b-a) for j in [-n/2, n/2) when n is even, symmetric when odd.
FrequencyGrid frequency_grid_for(const SampleGrid& grid);

/// Inclusive uniform grid lo, lo+resolution, ..., hi.
FrequencyGrid uniform_frequency_grid(double lo, double hi, double resolution);

bool same_grid(const FrequencyGrid& a, const FrequencyGrid& b, double tol = 1e-9);

}  // namespace ffdyn
