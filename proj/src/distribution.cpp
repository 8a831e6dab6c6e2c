#include "ffdyn/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "ffdyn/rng.hpp"

namespace ffdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

DistributionSpec DistributionSpec::normal(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal: sigma must be > 0");
  DistributionSpec d;
  d.kind_ = DistKind::kNormal;
  d.sigma_ = sigma;
  return d;
}

DistributionSpec DistributionSpec::uniform(double halfwidth) {
  if (!(halfwidth > 0.0)) throw std::invalid_argument("uniform: halfwidth must be > 0");
  DistributionSpec d;
  d.kind_ = DistKind::kUniform;
  d.halfwidth_ = halfwidth;
  return d;
}

DistributionSpec DistributionSpec::tabulated(std::vector<double> nodes,
                                             std::vector<double> densities) {
  if (nodes.size() < 2 || nodes.size() != densities.size())
    throw std::invalid_argument("tabulated: need equal-length nodes/densities, at least 2");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("tabulated: nodes must be strictly increasing");
  for (double v : densities)
    if (!(v >= 0.0)) throw std::invalid_argument("tabulated: densities must be nonnegative");

  std::vector<double> cdf(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    cdf[i] = cdf[i - 1] +
             0.5 * (densities[i] + densities[i - 1]) * (nodes[i] - nodes[i - 1]);
  if (std::abs(cdf.back() - 1.0) > 1e-6)
    throw std::invalid_argument("tabulated: trapezoid integral must be 1 within 1e-6, got " +
                                std::to_string(cdf.back()));

  DistributionSpec d;
  d.kind_ = DistKind::kTabulated;
  d.nodes_ = std::move(nodes);
  d.densities_ = std::move(densities);
  d.cdf_ = std::move(cdf);
  return d;
}

double DistributionSpec::pdf(double xi) const {
  switch (kind_) {
    case DistKind::kNormal: {
      const double z = xi / sigma_;
      return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(kTwoPi));
    }
    case DistKind::kUniform:
      return (xi >= -halfwidth_ && xi <= halfwidth_) ? 1.0 / (2.0 * halfwidth_) : 0.0;
    case DistKind::kTabulated: {
      if (xi < nodes_.front() || xi > nodes_.back()) return 0.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xi);
      if (it == nodes_.begin()) return densities_.front();
      if (it == nodes_.end()) return densities_.back();
      const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
      const double t = (xi - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return densities_[i - 1] + t * (densities_[i] - densities_[i - 1]);
    }
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (kind_) {
    case DistKind::kNormal:
      return sigma_ * sigma_;
    case DistKind::kUniform:
      return halfwidth_ * halfwidth_ / 3.0;
    case DistKind::kTabulated: {
      // Exact segment moments of the piecewise-linear density: the integrands
      // x rho and x^2 rho are cubic at most, Simpson on each segment is exact
      // for the quadratic and a 2-point Gauss rule handles the cubic.
      double m1 = 0.0, m2 = 0.0;
      const double g = 1.0 / std::sqrt(3.0);
      for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const double x0 = nodes_[i - 1], x1 = nodes_[i];
        const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
        for (double gp : {-g, g}) {
          const double x = mid + half * gp;
          const double t = (x - x0) / (x1 - x0);
          const double rho = densities_[i - 1] + t * (densities_[i] - densities_[i - 1]);
          m1 += half * x * rho;
          m2 += half * x * x * rho;
        }
      }
      return m2 - m1 * m1;
    }
  }
  return 0.0;
}

std::vector<double> DistributionSpec::breakpoints() const {
  switch (kind_) {
    case DistKind::kNormal:
      return {};
    case DistKind::kUniform:
      return {-halfwidth_, halfwidth_};
    case DistKind::kTabulated:
      return nodes_;
  }
  return {};
}

std::vector<double> DistributionSpec::sample(std::size_t m, std::uint64_t seed) const {
  if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
  SplitMix64 rng(seed);
  std::vector<double> out(m);
  switch (kind_) {
    case DistKind::kNormal:
      for (auto& v : out) v = sigma_ * rng.next_normal();
      break;
    case DistKind::kUniform:
      for (auto& v : out) v = halfwidth_ * (2.0 * rng.next_unit() - 1.0);
      break;
    case DistKind::kTabulated:
      for (auto& v : out) {
        const double u = rng.next_unit();
        // Locate the CDF segment, then invert the piecewise-quadratic CDF.
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t i = it == cdf_.begin()
                            ? 1
                            : std::min(static_cast<std::size_t>(it - cdf_.begin()),
                                       cdf_.size() - 1);
        const double x0 = nodes_[i - 1], x1 = nodes_[i];
        const double d0 = densities_[i - 1], d1 = densities_[i];
        const double du = u - cdf_[i - 1];
        const double slope = (d1 - d0) / (x1 - x0);
        double t;
        if (std::abs(slope) < 1e-14 * std::max(d0, d1)) {
          t = d0 > 0.0 ? du / d0 : 0.0;
        } else {
          const double disc = std::max(0.0, d0 * d0 + 2.0 * slope * du);
          t = (-d0 + std::sqrt(disc)) / slope;
        }
        v = std::clamp(x0 + t, x0, x1);
      }
      break;
  }
  return out;
}

std::string DistributionSpec::label() const {
  char buf[64];
  switch (kind_) {
    case DistKind::kNormal:
      std::snprintf(buf, sizeof(buf), "normal%.6g", sigma_);
      return buf;
    case DistKind::kUniform:
      std::snprintf(buf, sizeof(buf), "uniform%.6g", halfwidth_);
      return buf;
    case DistKind::kTabulated:
      std::snprintf(buf, sizeof(buf), "tabulated%zu", nodes_.size());
      return buf;
  }
  return "dist";
}

double pdf_eval(const DistributionSpec& dist, double xi) { return dist.pdf(xi); }

std::vector<double> sample_weights(const DistributionSpec& dist, std::size_t m,
                                   std::uint64_t seed) {
  return dist.sample(m, seed);
}

}  // namespace ffdyn
