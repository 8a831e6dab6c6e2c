#pragma once

#include <functional>
#include <string>

namespace ffdyn {

/// Scalar target functions on the sample interval.
class TargetSpec {
 public:
  /// round(sin(freq_factor * pi * x)). round is nearest-integer with exact
  /// .5 ties resolved away from zero.
  static TargetSpec rounded_sine(double freq_factor);
  static TargetSpec custom(std::string id, std::function<double(double)> fn);

  double operator()(double x) const { return fn_(x); }
  const std::string& id() const { return id_; }
  double freq_factor() const { return freq_factor_; }

 private:
  TargetSpec() = default;
  std::string id_;
  double freq_factor_ = 0.0;
  std::function<double(double)> fn_;
};

double target_eval(const TargetSpec& target, double x);

}  // namespace ffdyn
