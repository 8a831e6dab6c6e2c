#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ffdyn/compare.hpp"
#include "ffdyn/ensemble.hpp"
#include "ffdyn/kappa.hpp"
#include "ffdyn/pde.hpp"
#include "ffdyn/rng.hpp"
#include "ffdyn/train.hpp"

using namespace ffdyn;

namespace {

SpectralTrace synthetic_trace(const FrequencyGrid& grid,
                              const std::function<std::complex<double>(double, double)>& fn,
                              const std::vector<double>& times) {
  SpectralTrace trace;
  for (double t : times) {
    SpectralSnapshot s;
    s.grid = grid;
    s.time = t;
    s.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) s.values[j] = fn(grid.freqs[j], t);
    trace.snapshots.push_back(std::move(s));
  }
  return trace;
}

}  // namespace

TEST_CASE("estimate_kappa: exact log-linear decay and constants") {
  const auto grid = uniform_frequency_grid(-2.0, 2.0, 1.0);
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0};

  const auto trace = synthetic_trace(
      grid,
      [](double xi, double t) {
        return std::complex<double>(std::exp(xi == 0.0 ? -0.3 * t : 0.0), 0.0);
      },
      times);
  const auto prof = estimate_kappa(trace, 4);
  CHECK(prof.kappa[grid.index_of(0.0)] == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(prof.fit_r2[grid.index_of(0.0)] == doctest::Approx(1.0));
  CHECK(prof.kappa[grid.index_of(1.0)] == doctest::Approx(0.0));
  CHECK(prof.fit_r2[grid.index_of(1.0)] == doctest::Approx(1.0));
  for (auto v : prof.valid) CHECK(v == 1);
}

TEST_CASE("estimate_kappa recovers rho_w from the frozen closed form") {
  const auto grid = uniform_frequency_grid(-60.0, 60.0, 0.5);
  SpectralSnapshot u0;
  u0.grid = grid;
  u0.values.assign(grid.size(), {1.0, 0.0});

  const std::vector<double> times{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  for (const auto dist : {DistributionSpec::uniform(10.0),
                          DistributionSpec::normal(300.0 / (2.0 * std::numbers::pi))}) {
    const auto trace = frozen_trace(u0, dist, times);
    const auto prof = estimate_kappa(trace, times.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      worst = std::max(worst, std::abs(prof.kappa[j] - dist.pdf(grid.freqs[j])));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("estimate_kappa is invariant to a global complex scale") {
  const auto grid = uniform_frequency_grid(-5.0, 5.0, 0.5);
  SpectralSnapshot u0;
  u0.grid = grid;
  u0.values.assign(grid.size(), {0.4, 0.0});
  const auto dist = DistributionSpec::normal(2.0);
  const auto base = frozen_trace(u0, dist, {0.0, 0.5, 1.0, 1.5});

  SpectralTrace scaled = base;
  const std::complex<double> z{2.0, 3.0};
  for (auto& snap : scaled.snapshots)
    for (auto& v : snap.values) v *= z;

  const auto p1 = estimate_kappa(base, 4);
  const auto p2 = estimate_kappa(scaled, 4);
  for (std::size_t j = 0; j < grid.size(); ++j)
    CHECK(p1.kappa[j] == doctest::Approx(p2.kappa[j]).epsilon(1e-12));
}

TEST_CASE("estimate_kappa masks silent bins and rejects empty profiles") {
  const auto grid = uniform_frequency_grid(0.0, 3.0, 1.0);
  const std::vector<double> times{0.0, 1.0, 2.0};
  const auto trace = synthetic_trace(
      grid,
      [](double xi, double) {
        return std::complex<double>(xi < 1.5 ? 1e-12 : 1.0, 0.0);
      },
      times);
  const auto prof = estimate_kappa(trace, 3, 1e-8);
  CHECK(prof.valid[0] == 0);
  CHECK(prof.valid[1] == 0);
  CHECK(prof.valid[2] == 1);
  CHECK(prof.valid[3] == 1);

  const auto silent = synthetic_trace(
      grid, [](double, double) { return std::complex<double>(1e-15, 0.0); }, times);
  CHECK_THROWS(estimate_kappa(silent, 3, 1e-8));
}

TEST_CASE("default_fit_window covers the early tenth of the span") {
  const auto grid = uniform_frequency_grid(0.0, 1.0, 1.0);
  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(0.1 * k);
  const auto trace = synthetic_trace(
      grid, [](double, double) { return std::complex<double>(1.0, 0.0); }, times);
  CHECK(default_fit_window(trace) == 11);
  CHECK(default_fit_window(trace, 1.0) == 101);
}

TEST_CASE("ensemble_aggregate: mean spectra and cancellation") {
  const auto grid = uniform_frequency_grid(-4.0, 4.0, 0.5);
  SpectralSnapshot u0;
  u0.grid = grid;
  u0.values.assign(grid.size(), {1.0, 0.0});
  const auto dist = DistributionSpec::normal(2.0);
  const auto tr = frozen_trace(u0, dist, {0.0, 0.5, 1.0});

  const auto single = ensemble_aggregate({tr}, {0});
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
    for (std::size_t j = 0; j < grid.size(); ++j)
      CHECK(single.mean_spectrum[k].values[j] == tr.snapshots[k].values[j]);

  SpectralTrace neg = tr;
  for (auto& snap : neg.snapshots)
    for (auto& v : snap.values) v = -v;
  const auto cancelled = ensemble_aggregate({tr, neg}, {0, 1});
  for (const auto& snap : cancelled.mean_spectrum)
    for (const auto& v : snap.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("ensemble_aggregate rejects mismatched inputs") {
  const auto g1 = uniform_frequency_grid(-4.0, 4.0, 0.5);
  const auto g2 = uniform_frequency_grid(-4.0, 4.0, 1.0);
  SpectralSnapshot a, b;
  a.grid = g1;
  a.values.assign(g1.size(), {1.0, 0.0});
  b.grid = g2;
  b.values.assign(g2.size(), {1.0, 0.0});
  const auto dist = DistributionSpec::normal(1.0);
  const auto t1 = frozen_trace(a, dist, {0.0, 1.0});
  const auto t2 = frozen_trace(b, dist, {0.0, 1.0});
  CHECK_THROWS(ensemble_aggregate({t1, t2}, {0, 1}));
}

TEST_CASE("frozen-weight training ensemble recovers the density shape") {
  // Eq.-(14)-style ensemble check on real training runs: the averaged
  // learning-rate profile tracks rho_w inside the support after one global
  // rescale (the NN clock differs from the model clock by a constant).
  const auto uni = DistributionSpec::uniform(10.0);
  std::vector<SpectralTrace> traces;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrainConfig cfg;
    cfg.m = 500;
    cfg.dist_w = uni;
    cfg.frozen_w = true;
    cfg.grid = make_sample_grid(240, -1.0, 1.0);
    cfg.iterations = 100;
    cfg.snapshot_every = 10;
    cfg.step_size = 1e-3 / 240.0;
    cfg.seed = seed;
    traces.push_back(train(cfg).spectra);
    seeds.push_back(seed);
  }
  const auto ens = ensemble_aggregate(traces, seeds, KappaMode::kAverageThenFit, 11, 1e-6);

  // Average in-support kappa vs average out-of-support kappa.
  double in_sum = 0.0, out_sum = 0.0;
  int in_n = 0, out_n = 0;
  const auto& grid = ens.mean_kappa.grid;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!ens.mean_kappa.valid[j]) continue;
    const double xi = std::abs(grid.freqs[j]);
    if (xi < 8.0) {
      in_sum += ens.mean_kappa.kappa[j];
      ++in_n;
    } else if (xi > 12.0 && xi < 25.0) {
      out_sum += std::abs(ens.mean_kappa.kappa[j]);
      ++out_n;
    }
  }
  REQUIRE(in_n > 0);
  REQUIRE(out_n > 0);
  CHECK(in_sum / in_n > 5.0 * (out_sum / out_n));
}

TEST_CASE("compare: a trace against itself") {
  const auto grid = uniform_frequency_grid(-10.0, 10.0, 0.5);
  SpectralSnapshot u0;
  u0.grid = grid;
  u0.values.assign(grid.size(), {1.0, 0.0});
  const auto dist = DistributionSpec::normal(4.0);
  const auto tr = frozen_trace(u0, dist, {0.0, 1.0, 2.0, 3.0});
  const auto ens = ensemble_aggregate({tr}, {0});
  const auto rep = compare(ens, tr, dist);
  CHECK(rep.time_scale == doctest::Approx(1.0).epsilon(1e-6));
  for (double d : rep.rel_l2) CHECK(d < 1e-8);
  CHECK(rep.spearman_kappa_rho == doctest::Approx(1.0));
}

TEST_CASE("compare recovers a known time rescaling") {
  const auto grid = uniform_frequency_grid(-10.0, 10.0, 0.5);
  SpectralSnapshot u0;
  u0.grid = grid;
  u0.values.assign(grid.size(), {1.0, 0.0});
  const auto dist = DistributionSpec::normal(4.0);

  // Network clock runs 1000x slower than the model clock.
  const auto nn = frozen_trace(u0, dist, {0.0, 0.001, 0.002, 0.003});
  SpectralTrace nn_scaled = nn;
  for (std::size_t k = 0; k < nn_scaled.snapshots.size(); ++k) {
    const double t_model = 1000.0 * nn.snapshots[k].time;
    nn_scaled.snapshots[k] = frozen_solution(u0, dist, t_model);
    nn_scaled.snapshots[k].time = nn.snapshots[k].time;
  }
  const auto model = frozen_trace(u0, dist, {0.0, 1.0, 2.0, 3.0});
  const auto ens = ensemble_aggregate({nn_scaled}, {0});
  const auto rep = compare(ens, model, dist);
  CHECK(rep.time_scale == doctest::Approx(1000.0).epsilon(1e-3));
  for (double d : rep.rel_l2) CHECK(d < 1e-6);
}

TEST_CASE("spearman: monotone, reversed, ties, degenerate") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> inc{10.0, 20.0, 30.0, 40.0};
  std::vector<double> dec{4.0, 3.0, 2.0, 1.0};
  CHECK(spearman(x, inc) == doctest::Approx(1.0));
  CHECK(spearman(x, dec) == doctest::Approx(-1.0));

  std::vector<double> tied_x{1.0, 1.0, 2.0, 2.0};
  std::vector<double> tied_y{5.0, 5.0, 9.0, 9.0};
  CHECK(spearman(tied_x, tied_y) == doctest::Approx(1.0));

  std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
  CHECK(spearman(flat, flat) == doctest::Approx(1.0));
  CHECK(spearman(flat, inc) == doctest::Approx(0.0));
}

TEST_CASE("ensemble is permutation-insensitive up to rounding") {
  const auto grid = uniform_frequency_grid(-6.0, 6.0, 0.5);
  const auto dist = DistributionSpec::normal(3.0);
  std::vector<SpectralTrace> traces;
  SplitMix64 rng(1234);
  for (int s = 0; s < 5; ++s) {
    SpectralSnapshot u0;
    u0.grid = grid;
    u0.values.resize(grid.size());
    for (auto& v : u0.values) v = {rng.next_normal(), rng.next_normal()};
    traces.push_back(frozen_trace(u0, dist, {0.0, 0.5, 1.0}));
  }
  const auto fwd = ensemble_aggregate(traces, {0, 1, 2, 3, 4});
  std::vector<SpectralTrace> rev(traces.rbegin(), traces.rend());
  const auto bwd = ensemble_aggregate(rev, {4, 3, 2, 1, 0});
  for (std::size_t k = 0; k < fwd.mean_spectrum.size(); ++k)
    for (std::size_t j = 0; j < grid.size(); ++j)
      CHECK(std::abs(fwd.mean_spectrum[k].values[j] - bwd.mean_spectrum[k].values[j]) <
            1e-12);
}
