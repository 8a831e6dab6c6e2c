#include "ffdyn/compare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ffdyn {

namespace {

std::vector<double> tie_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

// Linear interpolation of a sampled curve onto query abscissae; clamped ends.
double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys,
                      double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series of size >= 2");
  const auto rx = tie_ranks(x);
  const auto ry = tie_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
    sxy += (rx[i] - mx) * (ry[i] - my);
  }
  if (sxx == 0.0 && syy == 0.0) return 1.0;
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

ComparisonReport compare(const EnsembleResult& nn, const SpectralTrace& model,
                         const DistributionSpec& dist, double band_limit,
                         double amplitude_floor) {
  if (nn.mean_spectrum.size() < 2 || model.snapshots.size() < 2)
    throw std::invalid_argument("compare: need >= 2 snapshots on both sides");
  const FrequencyGrid& grid = nn.mean_spectrum.front().grid;
  const std::size_t bins = grid.size();

  // Model spectra resampled onto the network grid, as log magnitudes.
  const std::size_t n_model = model.snapshots.size();
  std::vector<double> model_times(n_model);
  std::vector<std::vector<double>> model_mag(n_model, std::vector<double>(bins));
  for (std::size_t k = 0; k < n_model; ++k) {
    const auto& snap = model.snapshots[k];
    model_times[k] = snap.time;
    std::vector<double> mags(snap.values.size());
    for (std::size_t j = 0; j < snap.values.size(); ++j)
      mags[j] = std::abs(snap.values[j]);
    for (std::size_t j = 0; j < bins; ++j)
      model_mag[k][j] = interp_clamped(snap.grid.freqs, mags, grid.freqs[j]);
  }

  std::vector<std::uint8_t> use(bins, 0);
  std::size_t used = 0;
  for (std::size_t j = 0; j < bins; ++j) {
    if (std::abs(nn.mean_spectrum.front().values[j]) >= amplitude_floor &&
        model_mag.front()[j] >= amplitude_floor) {
      use[j] = 1;
      ++used;
    }
  }
  if (used == 0) throw std::runtime_error("compare: empty valid band");

  const std::size_t n_nn = nn.mean_spectrum.size();
  std::vector<double> nn_times(n_nn);
  std::vector<std::vector<double>> nn_log(n_nn, std::vector<double>(bins, 0.0));
  std::vector<std::vector<double>> model_log(n_model, std::vector<double>(bins, 0.0));
  for (std::size_t k = 0; k < n_nn; ++k) {
    nn_times[k] = nn.mean_spectrum[k].time;
    for (std::size_t j = 0; j < bins; ++j)
      if (use[j]) nn_log[k][j] = std::log(std::max(std::abs(nn.mean_spectrum[k].values[j]),
                                                   1e-300));
  }
  for (std::size_t k = 0; k < n_model; ++k)
    for (std::size_t j = 0; j < bins; ++j)
      if (use[j]) model_log[k][j] = std::log(std::max(model_mag[k][j], 1e-300));

  // Model log magnitude at scaled time, per bin, linear in t.
  std::vector<double> col(n_model);
  auto model_log_at = [&](double t, std::size_t j) {
    for (std::size_t k = 0; k < n_model; ++k) col[k] = model_log[k][j];
    return interp_clamped(model_times, col, t);
  };

  auto objective = [&](double alpha) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_nn; ++k) {
      const double tm = alpha * nn_times[k];
      for (std::size_t j = 0; j < bins; ++j) {
        if (!use[j]) continue;
        const double d = nn_log[k][j] - model_log_at(tm, j);
        acc += d * d;
      }
    }
    return acc;
  };

  // One global time-scale factor: coarse scan in log alpha, then golden
  // section refinement. Never fitted per frequency.
  const double nn_span = nn_times.back() - nn_times.front();
  const double model_span = model_times.back() - model_times.front();
  double alpha = 1.0;
  if (nn_span > 0.0 && model_span > 0.0) {
    const double center = std::log(model_span / nn_span);
    const double half_range = std::log(100.0);
    const int coarse = 241;
    double best_l = center, best_f = objective(std::exp(center));
    for (int i = 0; i < coarse; ++i) {
      const double l = center - half_range +
                       2.0 * half_range * static_cast<double>(i) / (coarse - 1);
      const double fv = objective(std::exp(l));
      if (fv < best_f) {
        best_f = fv;
        best_l = l;
      }
    }
    const double hstep = 2.0 * half_range / (coarse - 1);
    double lo = best_l - hstep, hi = best_l + hstep;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = objective(std::exp(x1)), f2 = objective(std::exp(x2));
    for (int it = 0; it < 90; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = objective(std::exp(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = objective(std::exp(x2));
      }
    }
    alpha = std::exp(0.5 * (lo + hi));
  }

  ComparisonReport rep;
  rep.time_scale = alpha;
  rep.nn_times = nn_times;
  rep.rel_l2.resize(n_nn);
  for (std::size_t k = 0; k < n_nn; ++k) {
    double num = 0.0, den = 0.0;
    const double tm = alpha * nn_times[k];
    for (std::size_t j = 0; j < bins; ++j) {
      if (!use[j]) continue;
      const double mv = std::exp(model_log_at(tm, j));
      const double nv = std::abs(nn.mean_spectrum[k].values[j]);
      num += (nv - mv) * (nv - mv);
      den += mv * mv;
    }
    rep.rel_l2[k] = den > 0.0 ? std::sqrt(num / den) : 0.0;
  }

  // Rank correlation between the ensemble kappa profile and rho_w.
  std::vector<double> kx, ky;
  double lo_abs = std::numeric_limits<double>::infinity(), hi_abs = 0.0;
  for (std::size_t j = 0; j < bins; ++j) {
    if (!nn.mean_kappa.valid[j]) continue;
    const double f = grid.freqs[j];
    if (std::abs(f) > band_limit) continue;
    kx.push_back(nn.mean_kappa.kappa[j]);
    ky.push_back(dist.pdf(f));
    lo_abs = std::min(lo_abs, std::abs(f));
    hi_abs = std::max(hi_abs, std::abs(f));
  }
  if (kx.size() < 2) throw std::runtime_error("compare: empty valid band for correlation");
  rep.spearman_kappa_rho = spearman(kx, ky);
  rep.band_lo = lo_abs;
  rep.band_hi = hi_abs;
  rep.band_bins = kx.size();
  return rep;
}

}  // namespace ffdyn
