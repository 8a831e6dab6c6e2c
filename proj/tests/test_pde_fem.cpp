#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ffdyn/fem.hpp"
#include "ffdyn/pde.hpp"
#include "ffdyn/rng.hpp"

using namespace ffdyn;

namespace {

SpectralSnapshot snapshot_on(const FrequencyGrid& grid,
                             const std::function<std::complex<double>(double)>& fn) {
  SpectralSnapshot s;
  s.grid = grid;
  s.values.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) s.values[j] = fn(grid.freqs[j]);
  return s;
}

}  // namespace

TEST_CASE("symmetrize_density") {
  const auto nrm = DistributionSpec::normal(2.0);
  auto sym = symmetrize_density(nrm);
  for (double xi : {0.0, 0.7, 3.0}) CHECK(sym(xi) == doctest::Approx(nrm.pdf(xi)));

  // One-sided density 1/R on [0, R] symmetrizes to 1/(2R) on [-R, R].
  const double r = 4.0;
  const auto onesided = DistributionSpec::tabulated({0.0, r}, {1.0 / r, 1.0 / r});
  auto s2 = symmetrize_density(onesided);
  CHECK(s2(1.0) == doctest::Approx(1.0 / (2.0 * r)));
  CHECK(s2(-1.0) == doctest::Approx(1.0 / (2.0 * r)));
  CHECK(s2(r + 0.5) == 0.0);

  const auto skew = DistributionSpec::tabulated({-1.0, 0.0, 2.0}, {0.0, 2.0 / 3.0, 0.0});
  auto s3 = symmetrize_density(skew);
  for (double xi = -2.0; xi <= 2.0; xi += 0.25) CHECK(s3(xi) == doctest::Approx(s3(-xi)));
}

TEST_CASE("build_coefficients reproduces the damped-heat coefficients") {
  const auto nrm = DistributionSpec::normal(3.0);
  const double two_pi = 2.0 * std::numbers::pi;

  const auto f = build_coefficients(nrm, 0.1, two_pi, 1);
  for (double xi : {0.0, 1.0, 4.0}) {
    CHECK(f.damping(xi) == doctest::Approx(nrm.pdf(xi)).epsilon(1e-14));
    CHECK(f.diffusion(xi) == doctest::Approx(0.01 * nrm.pdf(xi)).epsilon(1e-14));
  }

  const auto frozen = build_coefficients(nrm, 0.0);
  for (double xi : {0.0, 2.5}) {
    CHECK(frozen.diffusion(xi) == 0.0);
    CHECK(frozen.damping(xi) == doctest::Approx(nrm.pdf(xi)));
  }

  // General activation scale: c = pi doubles the damping at xi = 0.
  const auto unit = DistributionSpec::normal(1.0);
  const auto fc = build_coefficients(unit, 0.5, std::numbers::pi, 1);
  CHECK(fc.damping(0.0) == doctest::Approx(0.79788456080286541).epsilon(1e-12));

  // D = sigma_a^2 Lambda c^2 / (4 pi^2) pointwise, for several scales.
  for (double c : {std::numbers::pi, two_pi, 3.0}) {
    const auto g = build_coefficients(unit, 0.7, c, 1);
    for (double xi = -2.0; xi <= 2.0; xi += 0.5) {
      const double expected = 0.49 * g.damping(xi) * c * c / (4.0 * std::numbers::pi * std::numbers::pi);
      CHECK(g.diffusion(xi) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(g.damping(xi) == doctest::Approx(g.damping(-xi)));
    }
  }
}

TEST_CASE("frozen_solution: identity, support, decay, semigroup") {
  const auto grid = uniform_frequency_grid(-20.0, 20.0, 0.5);
  const auto u0 = snapshot_on(grid, [](double) { return std::complex<double>(1.0, 0.0); });
  const auto uni = DistributionSpec::uniform(10.0);

  const auto same = frozen_solution(u0, uni, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(same.values[j] == u0.values[j]);

  const auto later = frozen_solution(u0, uni, 20.0);
  CHECK(std::abs(later.values[grid.index_of(15.0)] - 1.0) == 0.0);
  const double at_zero = std::abs(later.values[grid.index_of(0.0)]);
  CHECK(at_zero == doctest::Approx(0.36787944117144233).epsilon(1e-12));

  const auto nrm = DistributionSpec::normal(5.0);
  const auto a = frozen_solution(frozen_solution(u0, nrm, 3.0), nrm, 4.5);
  const auto b = frozen_solution(u0, nrm, 7.5);
  for (std::size_t j = 0; j < grid.size(); ++j)
    CHECK(std::abs(a.values[j] - b.values[j]) <=
          1e-12 * std::max(1.0, std::abs(b.values[j])));
}

TEST_CASE("build_mesh") {
  const auto mesh = build_mesh(-60.0, 60.0, 0.5);
  CHECK(mesh.size() == 241);
  CHECK(mesh.nodes.front() == -60.0);
  CHECK(mesh.nodes.back() == 60.0);

  const auto small = build_mesh(0.0, 1.0, 0.5);
  REQUIRE(small.size() == 3);
  CHECK(small.nodes[1] == doctest::Approx(0.5));

  CHECK_THROWS(build_mesh(0.0, 1.0, 0.3));
  CHECK_THROWS(build_mesh(1.0, 0.0, 0.5));
}

TEST_CASE("assemble: exact P1 integrals") {
  const auto mesh = build_mesh(0.0, 4.0, 0.5);
  const auto unit_field = field_from_density([](double) { return 1.0; }, 0.0);
  const auto sys = assemble(mesh, unit_field, 0.1);
  const double h = mesh.h;

  for (std::size_t i = 1; i + 1 < mesh.size(); ++i)
    CHECK(sys.mass.diag[i] == doctest::Approx(2.0 * h / 3.0).epsilon(1e-14));
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
    CHECK(sys.mass.off[i] == doctest::Approx(h / 6.0).epsilon(1e-14));
  CHECK(sys.mass.diag[0] == doctest::Approx(h / 3.0).epsilon(1e-14));

  // Unit weight: N equals L entrywise, M is the plain P1 stiffness.
  for (std::size_t i = 0; i < mesh.size(); ++i)
    CHECK(std::abs(sys.damped_mass.diag[i] - sys.mass.diag[i]) < 1e-12);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
    CHECK(std::abs(sys.damped_mass.off[i] - sys.mass.off[i]) < 1e-12);
  for (std::size_t i = 1; i + 1 < mesh.size(); ++i)
    CHECK(sys.stiffness.diag[i] == doctest::Approx(2.0 / h).epsilon(1e-13));
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
    CHECK(sys.stiffness.off[i] == doctest::Approx(-1.0 / h).epsilon(1e-13));
}

TEST_CASE("assemble splits elements at density jumps") {
  // Uniform(R) with R inside an element: N must integrate the jump exactly.
  const double r = 1.3;
  const auto uni = DistributionSpec::uniform(r);
  const auto mesh = build_mesh(-2.0, 2.0, 0.5);
  const auto sys = assemble(mesh, build_coefficients(uni, 0.0), 0.1);
  // Total damping mass: sum_ij N_ij = integral of rho over [-2,2] = 1.
  double total = 0.0;
  for (double v : sys.damped_mass.diag) total += v;
  for (double v : sys.damped_mass.off) total += 2.0 * v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("project_initial: nodal copy, zero, interpolation bound") {
  const auto mesh = build_mesh(-60.0, 60.0, 0.5);

  // Exact node match, including the +Nyquist wrap onto -60.
  const auto g240 = make_sample_grid(240, -1.0, 1.0);
  std::vector<double> sig(g240.n);
  SplitMix64 rng(5);
  for (auto& v : sig) v = rng.next_normal();
  const auto u0 = dft_forward(g240, sig);
  const auto state = project_initial(u0, mesh);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const auto j = u0.grid.index_of(mesh.nodes[i]);
    REQUIRE(j != FrequencyGrid::npos);
    CHECK(state.re[i] == doctest::Approx(u0.values[j].real()).epsilon(1e-12));
    CHECK(state.im[i] == doctest::Approx(u0.values[j].imag()).epsilon(1e-12));
  }
  CHECK(state.re.back() == doctest::Approx(u0.values[0].real()).epsilon(1e-12));

  const auto zero = snapshot_on(u0.grid, [](double) { return std::complex<double>(0.0); });
  const auto zstate = project_initial(zero, mesh);
  for (double v : zstate.re) CHECK(v == 0.0);
  for (double v : zstate.im) CHECK(v == 0.0);

  // Gaussian sampled on an offset grid: linear interpolation error is below
  // h_src^2 max|u''| / 8 (s = 5 gives max|u''| = 1/25).
  const double s = 5.0;
  const auto src = uniform_frequency_grid(-60.0, 60.0, 0.4);
  const auto gauss = snapshot_on(src, [s](double xi) {
    return std::complex<double>(std::exp(-xi * xi / (2.0 * s * s)), 0.0);
  });
  const auto gstate = project_initial(gauss, mesh);
  const double bound = 0.4 * 0.4 * (1.0 / (s * s)) / 8.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double exact = std::exp(-mesh.nodes[i] * mesh.nodes[i] / (2.0 * s * s));
    worst = std::max(worst, std::abs(gstate.re[i] - exact));
  }
  CHECK(worst <= bound);
  CHECK(worst > 0.0);

  // Mesh wider than the spectrum is rejected.
  const auto narrow = uniform_frequency_grid(-10.0, 10.0, 0.5);
  const auto small = snapshot_on(narrow, [](double) { return std::complex<double>(1.0); });
  CHECK_THROWS(project_initial(small, mesh));
}

TEST_CASE("step: constant-density identity and zero fixed point") {
  const auto mesh = build_mesh(-10.0, 10.0, 0.5);
  const double rho0 = 0.3, dt = 0.1;
  const auto field = field_from_density([rho0](double) { return rho0; }, 0.0);
  const auto sys = assemble(mesh, field, dt);

  FemState state;
  state.re.assign(mesh.size(), 0.0);
  state.im.assign(mesh.size(), 0.0);
  SplitMix64 rng(17);
  for (auto& v : state.re) v = rng.next_normal();

  // N = rho0 L, so the implicit step is exact scalar division.
  const auto next = step(sys, state, dt);
  for (std::size_t i = 0; i < mesh.size(); ++i)
    CHECK(next.re[i] == doctest::Approx(state.re[i] / (1.0 + dt * rho0)).epsilon(1e-13));

  FemState zero;
  zero.re.assign(mesh.size(), 0.0);
  zero.im.assign(mesh.size(), 0.0);
  const auto znext = step(sys, zero, dt);
  for (double v : znext.re) CHECK(v == 0.0);

  CHECK_THROWS(step(sys, state, dt * 2.0));
}

TEST_CASE("step: one backward-Euler step tracks the frozen decay") {
  const auto mesh = build_mesh(-60.0, 60.0, 0.5);
  const auto nrm = DistributionSpec::normal(300.0 / (2.0 * std::numbers::pi));
  const double dt = 0.1;
  const auto sys = assemble(mesh, build_coefficients(nrm, 0.0), dt);

  FemState state;
  state.re.resize(mesh.size());
  state.im.assign(mesh.size(), 0.0);
  const double s = 20.0;
  for (std::size_t i = 0; i < mesh.size(); ++i)
    state.re[i] = std::exp(-mesh.nodes[i] * mesh.nodes[i] / (2.0 * s * s));

  const auto next = step(sys, state, dt);
  const double rho_max = nrm.pdf(0.0);
  const double bound = 2.0 * dt * rho_max * rho_max;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double exact = state.re[i] * std::exp(-nrm.pdf(mesh.nodes[i]) * dt);
    CHECK(std::abs(next.re[i] - exact) / exact <= bound);
  }
}

TEST_CASE("evolve: snapshot schedule and energy decay") {
  const auto mesh = build_mesh(-60.0, 60.0, 0.5);
  const auto nrm = DistributionSpec::normal(300.0 / (2.0 * std::numbers::pi));
  const auto sys = assemble(mesh, build_coefficients(nrm, 1.0), 0.1);

  FemState state;
  state.re.resize(mesh.size());
  state.im.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double xi = mesh.nodes[i];
    state.re[i] = std::exp(-xi * xi / 50.0);
    state.im[i] = xi * std::exp(-xi * xi / 30.0) * 0.01;
  }

  // Paper cadence: 5000 steps, one snapshot each 500 -> initial + 10.
  const auto trace = evolve(sys, state, 0.1, 5000, 500);
  CHECK(trace.snapshots.size() == 11);
  CHECK(trace.snapshots.front().time == doctest::Approx(0.0));
  CHECK(trace.snapshots.back().time == doctest::Approx(500.0));

  // Discrete L-energy is non-increasing step by step, also for large dt.
  for (double dt : {0.1, 10.0}) {
    const auto s2 = assemble(mesh, build_coefficients(nrm, 1.0), dt);
    FemState cur = state;
    double prev = spectral_energy(s2, cur);
    for (int k = 0; k < 50; ++k) {
      cur = step(s2, cur, dt);
      const double e = spectral_energy(s2, cur);
      CHECK(e <= prev * (1.0 + 1e-12));
      prev = e;
    }
  }
}

TEST_CASE("evolve preserves Hermitian symmetry on a symmetric mesh") {
  const auto mesh = build_mesh(-20.0, 20.0, 0.5);
  const auto nrm = DistributionSpec::normal(5.0);
  const auto sys = assemble(mesh, build_coefficients(nrm, 0.5), 0.1);

  FemState state;
  state.re.resize(mesh.size());
  state.im.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double xi = mesh.nodes[i];
    state.re[i] = std::exp(-xi * xi / 18.0);          // even
    state.im[i] = xi * std::exp(-xi * xi / 22.0);     // odd
  }
  const auto trace = evolve(sys, state, 0.1, 200, 50);
  for (const auto& snap : trace.snapshots) CHECK(hermitian_asymmetry(snap) < 1e-12);
}

TEST_CASE("constant-coefficient damped heat kernel oracle (short horizon)") {
  // rho = rho0 everywhere, u0 = exp(-xi^2/(2 s^2)):
  // u(xi,t) = s/sqrt(s^2+2Dt) exp(-xi^2/(2(s^2+2Dt))) exp(-rho0 t), D = sigma_a^2 rho0.
  const double rho0 = 0.05, sigma_a = 1.0, s = 5.0, t_end = 5.0, dt = 0.1;
  const auto mesh = build_mesh(-100.0, 100.0, 0.5);
  const auto sys = assemble(mesh, field_from_density([rho0](double) { return rho0; }, sigma_a), dt);

  FemState state;
  state.re.resize(mesh.size());
  state.im.assign(mesh.size(), 0.0);
  for (std::size_t i = 0; i < mesh.size(); ++i)
    state.re[i] = std::exp(-mesh.nodes[i] * mesh.nodes[i] / (2.0 * s * s));

  const auto trace = evolve(sys, state, dt, static_cast<std::size_t>(t_end / dt), 10);
  const auto& last = trace.snapshots.back();
  const double d = sigma_a * sigma_a * rho0;
  const double var = s * s + 2.0 * d * t_end;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double xi = mesh.nodes[i];
    const double exact = s / std::sqrt(var) * std::exp(-xi * xi / (2.0 * var)) *
                         std::exp(-rho0 * t_end);
    const double got = last.values[i].real();
    num += (got - exact) * (got - exact);
    den += exact * exact;
  }
  CHECK(std::sqrt(num / den) < 0.02);
}
