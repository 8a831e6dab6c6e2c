#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffdyn {

enum class DistKind { kNormal, kUniform, kTabulated };

/// Weight-frequency density rho_w. All frequencies are in cycles per unit
/// length; values like 300/(2*pi) are stored verbatim in these units.
class DistributionSpec {
 public:
  static DistributionSpec normal(double sigma);
  /// Exactly 1/(2R) on [-R, R], zero outside.
  static DistributionSpec uniform(double halfwidth);
  /// Piecewise-linear density on [nodes.front(), nodes.back()], zero outside.
  /// Must be nonnegative and integrate to 1 within 1e-6 by the trapezoid rule.
  static DistributionSpec tabulated(std::vector<double> nodes,
                                    std::vector<double> densities);

  DistKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double halfwidth() const { return halfwidth_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& densities() const { return densities_; }

  double pdf(double xi) const;
  double variance() const;

  /// Frequencies where the density jumps or kinks (support edges); used by
  /// quadrature to split elements before integrating.
  std::vector<double> breakpoints() const;

  /// m i.i.d. draws, fully determined by (kind, parameters, m, seed).
  std::vector<double> sample(std::size_t m, std::uint64_t seed) const;

  /// Short deterministic tag for artifact file names, e.g. "normal47.7465".
  std::string label() const;

 private:
  DistributionSpec() = default;
  DistKind kind_ = DistKind::kNormal;
  double sigma_ = 1.0;
  double halfwidth_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> densities_;
  std::vector<double> cdf_;  // tabulated only
};

double pdf_eval(const DistributionSpec& dist, double xi);
std::vector<double> sample_weights(const DistributionSpec& dist, std::size_t m,
                                   std::uint64_t seed);

}  // namespace ffdyn
