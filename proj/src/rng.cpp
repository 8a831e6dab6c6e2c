#include "ffdyn/rng.hpp"

#include <cmath>
#include <numbers>

namespace ffdyn {

double SplitMix64::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> SplitMix64::normals(std::size_t n, double mean, double stddev) {
  std::vector<double> out(n);
  for (auto& v : out) v = mean + stddev * next_normal();
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
  return g.next_u64();
}

}  // namespace ffdyn
