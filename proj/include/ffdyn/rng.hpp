#pragma once

#include <cstdint>
#include <vector>

namespace ffdyn {

/// SplitMix64 stream generator (Steele/Lea/Ostrovsky). The i-th output is
/// mix64(seed + (i+1)*GAMMA), i.e. a pure function of (seed, i), which makes
/// every sequence reproducible across runs and thread counts.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw. Basic (non-rejection) Box-Muller: each pair of
  /// normals consumes exactly two uniforms, so the stream layout is fixed.
  double next_normal();

  std::vector<double> normals(std::size_t n, double mean = 0.0, double stddev = 1.0);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Decorrelated seed for substream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ffdyn
