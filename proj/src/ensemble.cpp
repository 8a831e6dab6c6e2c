#include "ffdyn/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace ffdyn {

SpectralTrace EnsembleResult::mean_trace() const {
  SpectralTrace t;
  t.snapshots = mean_spectrum;
  return t;
}

EnsembleResult ensemble_aggregate(const std::vector<SpectralTrace>& traces,
                                  const std::vector<std::uint64_t>& seeds,
                                  KappaMode mode, std::size_t window,
                                  double amplitude_floor) {
  if (traces.empty()) throw std::invalid_argument("ensemble: need at least one trace");
  if (!seeds.empty() && seeds.size() != traces.size())
    throw std::invalid_argument("ensemble: seed list length mismatch");
  const auto& ref = traces.front();
  const std::size_t n_snap = ref.snapshots.size();
  const std::size_t bins = ref.grid().size();
  for (const auto& tr : traces) {
    if (tr.snapshots.size() != n_snap)
      throw std::invalid_argument("ensemble: snapshot schedules differ");
    if (!same_grid(tr.grid(), ref.grid()))
      throw std::invalid_argument("ensemble: frequency grids differ");
    for (std::size_t k = 0; k < n_snap; ++k)
      if (std::abs(tr.snapshots[k].time - ref.snapshots[k].time) >
          1e-9 * std::max(1.0, std::abs(ref.snapshots[k].time)))
        throw std::invalid_argument("ensemble: snapshot times differ");
  }

  EnsembleResult out;
  out.seeds = seeds;

  out.mean_spectrum.resize(n_snap);
  const double inv = 1.0 / static_cast<double>(traces.size());
  for (std::size_t k = 0; k < n_snap; ++k) {
    SpectralSnapshot snap;
    snap.grid = ref.grid();
    snap.time = ref.snapshots[k].time;
    snap.values.assign(bins, {0.0, 0.0});
    for (const auto& tr : traces)
      for (std::size_t j = 0; j < bins; ++j) snap.values[j] += tr.snapshots[k].values[j];
    for (auto& v : snap.values) v *= inv;
    out.mean_spectrum[k] = std::move(snap);
  }

  const std::size_t w = window != 0 ? window : default_fit_window(ref);

  out.per_seed_kappa.reserve(traces.size());
  for (const auto& tr : traces) {
    try {
      out.per_seed_kappa.push_back(estimate_kappa(tr, w, amplitude_floor));
    } catch (const std::runtime_error&) {
      // A fully-masked seed contributes nothing but keeps indices aligned.
      KappaProfile empty;
      empty.grid = ref.grid();
      empty.kappa.assign(bins, 0.0);
      empty.fit_r2.assign(bins, 0.0);
      empty.valid.assign(bins, 0);
      out.per_seed_kappa.push_back(std::move(empty));
    }
  }

  if (mode == KappaMode::kAverageThenFit) {
    out.mean_kappa = estimate_kappa(out.mean_trace(), w, amplitude_floor);
    return out;
  }

  KappaProfile mean;
  mean.grid = ref.grid();
  mean.kappa.assign(bins, 0.0);
  mean.fit_r2.assign(bins, 0.0);
  mean.valid.assign(bins, 0);
  for (std::size_t j = 0; j < bins; ++j) {
    std::size_t count = 0;
    double ksum = 0.0, rsum = 0.0;
    for (const auto& prof : out.per_seed_kappa) {
      if (!prof.valid[j]) continue;
      ksum += prof.kappa[j];
      rsum += prof.fit_r2[j];
      ++count;
    }
    if (count > 0) {
      mean.kappa[j] = ksum / static_cast<double>(count);
      mean.fit_r2[j] = rsum / static_cast<double>(count);
      mean.valid[j] = 1;
    }
  }
  if (mean.valid_count() == 0)
    throw std::runtime_error("ensemble: every frequency masked in all seeds");
  out.mean_kappa = std::move(mean);
  return out;
}

}  // namespace ffdyn
