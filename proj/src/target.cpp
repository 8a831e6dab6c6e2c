#include "ffdyn/target.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace ffdyn {

TargetSpec TargetSpec::rounded_sine(double freq_factor) {
  TargetSpec t;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "rounded-sine:%.6g", freq_factor);
  t.id_ = buf;
  t.freq_factor_ = freq_factor;
  // std::round implements half-away-from-zero, the documented tie-break.
  t.fn_ = [freq_factor](double x) {
    return std::round(std::sin(freq_factor * std::numbers::pi * x));
  };
  return t;
}

TargetSpec TargetSpec::custom(std::string id, std::function<double(double)> fn) {
  TargetSpec t;
  t.id_ = std::move(id);
  t.fn_ = std::move(fn);
  return t;
}

double target_eval(const TargetSpec& target, double x) { return target(x); }

}  // namespace ffdyn
