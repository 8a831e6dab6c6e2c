#include "ffdyn/kappa.hpp"

#include <cmath>
#include <stdexcept>

namespace ffdyn {

std::size_t KappaProfile::valid_count() const {
  std::size_t c = 0;
  for (auto v : valid) c += v != 0;
  return c;
}

std::size_t default_fit_window(const SpectralTrace& trace, double fraction) {
  const auto& snaps = trace.snapshots;
  if (snaps.size() < 2) throw std::invalid_argument("fit window: need >= 2 snapshots");
  const double t0 = snaps.front().time;
  const double cutoff = t0 + fraction * (snaps.back().time - t0);
  std::size_t w = 0;
  while (w < snaps.size() && snaps[w].time <= cutoff + 1e-15) ++w;
  return std::max<std::size_t>(w, 2);
}

KappaProfile estimate_kappa(const SpectralTrace& trace, std::size_t window,
                            double amplitude_floor) {
  if (window < 2) throw std::invalid_argument("estimate_kappa: window must be >= 2");
  if (!(amplitude_floor > 0.0))
    throw std::invalid_argument("estimate_kappa: amplitude_floor must be > 0");
  if (trace.snapshots.size() < window)
    throw std::invalid_argument("estimate_kappa: trace shorter than window");

  const std::size_t bins = trace.grid().size();
  KappaProfile out;
  out.grid = trace.grid();
  out.kappa.assign(bins, 0.0);
  out.fit_r2.assign(bins, 0.0);
  out.valid.assign(bins, 0);

  std::vector<double> t(window), y(window);
  for (std::size_t j = 0; j < bins; ++j) {
    if (std::abs(trace.snapshots.front().values[j]) < amplitude_floor) continue;
    bool ok = true;
    for (std::size_t k = 0; k < window; ++k) {
      const double mag = std::abs(trace.snapshots[k].values[j]);
      if (mag <= 0.0) {
        ok = false;
        break;
      }
      t[k] = trace.snapshots[k].time;
      y[k] = std::log(mag);
    }
    if (!ok) continue;

    double tm = 0.0, ym = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      tm += t[k];
      ym += y[k];
    }
    tm /= static_cast<double>(window);
    ym /= static_cast<double>(window);
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      stt += (t[k] - tm) * (t[k] - tm);
      sty += (t[k] - tm) * (y[k] - ym);
      syy += (y[k] - ym) * (y[k] - ym);
    }
    if (!(stt > 0.0)) continue;
    const double slope = sty / stt;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      const double r = y[k] - ym - slope * (t[k] - tm);
      ss_res += r * r;
    }
    out.kappa[j] = -slope;
    // A constant trace fits exactly: r2 = 1 when there is nothing to explain.
    out.fit_r2[j] = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    out.valid[j] = 1;
  }

  if (out.valid_count() == 0)
    throw std::runtime_error("estimate_kappa: every frequency masked (empty profile)");
  return out;
}

}  // namespace ffdyn
