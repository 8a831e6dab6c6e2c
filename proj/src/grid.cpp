#include "ffdyn/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ffdyn {

SampleGrid make_sample_grid(std::size_t n, double a, double b) {
  if (n < 1) throw std::invalid_argument("sample grid: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("sample grid: need a < b");
  SampleGrid g;
  g.n = n;
  g.a = a;
  g.b = b;
  g.points.resize(n);
  const double dx = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) g.points[i] = a + static_cast<double>(i) * dx;
  return g;
}

std::size_t FrequencyGrid::index_of(double xi) const {
  if (freqs.empty()) return npos;
  const double tol = 1e-9 * std::max(1.0, resolution);
  // Uniform grid: direct index, then verify.
  const double pos = (xi - freqs.front()) / resolution;
  const auto j = static_cast<long long>(std::llround(pos));
  if (j < 0 || j >= static_cast<long long>(freqs.size())) return npos;
  const auto idx = static_cast<std::size_t>(j);
  return std::abs(freqs[idx] - xi) <= tol ? idx : npos;
}

FrequencyGrid frequency_grid_for(const SampleGrid& grid) {
  FrequencyGrid f;
  f.resolution = 1.0 / grid.length();
  const auto n = static_cast<long long>(grid.n);
  const long long lo = -(n / 2);
  f.freqs.resize(grid.n);
  for (long long j = 0; j < n; ++j)
    f.freqs[static_cast<std::size_t>(j)] = static_cast<double>(lo + j) * f.resolution;
  return f;
}

FrequencyGrid uniform_frequency_grid(double lo, double hi, double resolution) {
  if (!(resolution > 0.0) || !(lo < hi))
    throw std::invalid_argument("frequency grid: need lo < hi and resolution > 0");
  const double count = (hi - lo) / resolution;
  const auto n = static_cast<long long>(std::llround(count));
  if (std::abs(count - static_cast<double>(n)) > 1e-9 * std::max(1.0, count))
    throw std::invalid_argument("frequency grid: (hi-lo)/resolution must be integral");
  FrequencyGrid f;
  f.resolution = resolution;
  f.freqs.resize(static_cast<std::size_t>(n) + 1);
  for (long long j = 0; j <= n; ++j)
    f.freqs[static_cast<std::size_t>(j)] = lo + static_cast<double>(j) * resolution;
  return f;
}

bool same_grid(const FrequencyGrid& a, const FrequencyGrid& b, double tol) {
  if (a.freqs.size() != b.freqs.size()) return false;
  for (std::size_t i = 0; i < a.freqs.size(); ++i)
    if (std::abs(a.freqs[i] - b.freqs[i]) > tol) return false;
  return true;
}

}  // namespace ffdyn
