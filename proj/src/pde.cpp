#include "ffdyn/pde.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ffdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::function<double(double)> symmetrize_density(const DistributionSpec& dist) {
  return [dist](double xi) { return 0.5 * (dist.pdf(xi) + dist.pdf(-xi)); };
}

CoefficientField build_coefficients(const DistributionSpec& dist, double sigma_a,
                                    double c, int dim) {
  if (!(sigma_a >= 0.0)) throw std::invalid_argument("coefficients: sigma_a must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("coefficients: c must be > 0");
  if (dim < 1) throw std::invalid_argument("coefficients: dim must be >= 1");

  const double ratio = kTwoPi / c;
  const double front = std::pow(ratio, dim);
  const double diff_scale = front * (c * c) / (4.0 * std::numbers::pi * std::numbers::pi);
  auto sym = symmetrize_density(dist);

  CoefficientField f;
  f.sigma_a = sigma_a;
  f.c = c;
  f.dim = dim;
  f.damping = [sym, front, ratio](double xi) { return front * sym(ratio * xi); };
  f.diffusion_weight = [sym, diff_scale, ratio](double xi) {
    return diff_scale * sym(ratio * xi);
  };
  // Breakpoints live where rho_sym(ratio * xi) jumps, i.e. xi = +-bp / ratio.
  for (double bp : dist.breakpoints()) {
    f.breakpoints.push_back(bp / ratio);
    f.breakpoints.push_back(-bp / ratio);
  }
  return f;
}

CoefficientField field_from_density(std::function<double(double)> rho, double sigma_a,
                                    std::vector<double> breakpoints) {
  CoefficientField f;
  f.sigma_a = sigma_a;
  f.c = kTwoPi;
  f.dim = 1;
  f.damping = rho;
  f.diffusion_weight = std::move(rho);
  f.breakpoints = std::move(breakpoints);
  return f;
}

SpectralSnapshot frozen_solution(const SpectralSnapshot& u0, const DistributionSpec& dist,
                                 double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("frozen_solution: t must be >= 0");
  SpectralSnapshot out = u0;
  out.time = u0.time + t;
  for (std::size_t j = 0; j < out.values.size(); ++j)
    out.values[j] *= std::exp(-dist.pdf(out.grid.freqs[j]) * t);
  return out;
}

SpectralTrace frozen_trace(const SpectralSnapshot& u0, const DistributionSpec& dist,
                           const std::vector<double>& times) {
  SpectralTrace trace;
  trace.snapshots.reserve(times.size());
  for (double t : times) trace.snapshots.push_back(frozen_solution(u0, dist, t));
  return trace;
}

}  // namespace ffdyn
