#include "ffdyn/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ffdyn {

namespace {

// 4-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussX[4] = {-0.8611363115940526, -0.33998104358485626,
                               0.33998104358485626, 0.8611363115940526};
constexpr double kGaussW[4] = {0.34785484513745385, 0.6521451548625461,
                               0.6521451548625461, 0.34785484513745385};

}  // namespace

FemMesh build_mesh(double a, double b, double h) {
  if (!(a < b)) throw std::invalid_argument("mesh: need a < b");
  if (!(h > 0.0)) throw std::invalid_argument("mesh: need h > 0");
  const double count = (b - a) / h;
  const auto n_elems = static_cast<long long>(std::llround(count));
  if (n_elems < 1 || std::abs(count - static_cast<double>(n_elems)) > 1e-9 * count)
    throw std::invalid_argument("mesh: (b-a)/h must be an integer, got " +
                                std::to_string(count));
  FemMesh mesh;
  mesh.a = a;
  mesh.b = b;
  mesh.h = h;
  mesh.nodes.resize(static_cast<std::size_t>(n_elems) + 1);
  for (long long i = 0; i <= n_elems; ++i)
    mesh.nodes[static_cast<std::size_t>(i)] = a + static_cast<double>(i) * h;
  mesh.nodes.back() = b;
  return mesh;
}

void Tridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
}

double Tridiagonal::quadratic_form(std::span<const double> x) const {
  const std::size_t n = size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += diag[i] * x[i] * x[i];
    if (i + 1 < n) acc += 2.0 * off[i] * x[i] * x[i + 1];
  }
  return acc;
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& m) {
  const std::size_t n = m.size();
  inv_piv_.resize(n);
  upper_.resize(n > 0 ? n - 1 : 0);
  off_ = m.off;
  double piv = m.diag[0];
  if (!(piv > 0.0)) throw std::runtime_error("tridiagonal factor: singular pivot 0");
  inv_piv_[0] = 1.0 / piv;
  for (std::size_t i = 1; i < n; ++i) {
    upper_[i - 1] = m.off[i - 1] * inv_piv_[i - 1];
    piv = m.diag[i] - m.off[i - 1] * upper_[i - 1];
    if (!(piv > 0.0))
      throw std::runtime_error("tridiagonal factor: singular pivot " + std::to_string(i));
    inv_piv_[i] = 1.0 / piv;
  }
}

void TridiagonalFactor::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = size();
  if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
  for (std::size_t i = 1; i < n; ++i) rhs[i] -= upper_[i - 1] * rhs[i - 1];
  rhs[n - 1] *= inv_piv_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - off_[i] * rhs[i + 1]) * inv_piv_[i];
}

FemSystem assemble(const FemMesh& mesh, const CoefficientField& coeffs, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("assemble: dt must be > 0");
  const std::size_t nn = mesh.size();
  FemSystem sys;
  sys.mesh = mesh;
  sys.sigma_a = coeffs.sigma_a;
  sys.dt = dt;
  sys.mass.diag.assign(nn, 0.0);
  sys.mass.off.assign(nn - 1, 0.0);
  sys.stiffness = sys.mass;
  sys.damped_mass = sys.mass;

  const double h = mesh.h;
  std::vector<double> cuts;
  for (std::size_t e = 0; e + 1 < nn; ++e) {
    const double x0 = mesh.nodes[e];
    const double x1 = mesh.nodes[e + 1];

    // Exact P1 mass integrals.
    sys.mass.diag[e] += h / 3.0;
    sys.mass.diag[e + 1] += h / 3.0;
    sys.mass.off[e] += h / 6.0;

    // Damping weight: split the element at discontinuities before quadrature
    // so a jump (uniform density edge) is integrated exactly on each side.
    cuts.clear();
    cuts.push_back(x0);
    for (double bp : coeffs.breakpoints)
      if (bp > x0 + 1e-12 * h && bp < x1 - 1e-12 * h) cuts.push_back(bp);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(x1);

    double n00 = 0.0, n01 = 0.0, n11 = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
      const double half = 0.5 * (cuts[s + 1] - cuts[s]);
      for (int q = 0; q < 4; ++q) {
        const double xi = mid + half * kGaussX[q];
        const double wq = half * kGaussW[q];
        const double phi0 = (x1 - xi) / h;
        const double phi1 = (xi - x0) / h;
        const double lam = coeffs.damping(xi);
        n00 += wq * lam * phi0 * phi0;
        n01 += wq * lam * phi0 * phi1;
        n11 += wq * lam * phi1 * phi1;
      }
    }
    sys.damped_mass.diag[e] += n00;
    sys.damped_mass.diag[e + 1] += n11;
    sys.damped_mass.off[e] += n01;

    // Diffusion weight: P1 interpolant from nodal values (the conventional
    // interpolated-coefficient treatment for the divergence-form term), so a
    // support edge couples one element outward. P1 gradients are +-1/h; the
    // element integral of the interpolant is exact.
    const double mw = 0.5 * h * (coeffs.diffusion_weight(x0) + coeffs.diffusion_weight(x1));
    sys.stiffness.diag[e] += mw / (h * h);
    sys.stiffness.diag[e + 1] += mw / (h * h);
    sys.stiffness.off[e] -= mw / (h * h);
  }

  Tridiagonal a;
  a.diag.resize(nn);
  a.off.resize(nn - 1);
  const double sa2 = sys.sigma_a * sys.sigma_a;
  for (std::size_t i = 0; i < nn; ++i)
    a.diag[i] = sys.mass.diag[i] + dt * sa2 * sys.stiffness.diag[i] +
                dt * sys.damped_mass.diag[i];
  for (std::size_t i = 0; i + 1 < nn; ++i)
    a.off[i] = sys.mass.off[i] + dt * sa2 * sys.stiffness.off[i] +
               dt * sys.damped_mass.off[i];
  sys.implicit_op = TridiagonalFactor(a);
  return sys;
}

FemState project_initial(const SpectralSnapshot& u0, const FemMesh& mesh) {
  const auto& freqs = u0.grid.freqs;
  if (freqs.size() < 2) throw std::invalid_argument("project: u0 grid too small");
  const double lo = freqs.front();
  const double hi = freqs.back();
  const double period = u0.grid.resolution * static_cast<double>(freqs.size());
  const double tol = 1e-9 * std::max(1.0, u0.grid.resolution);

  FemState state;
  state.time = u0.time;
  state.re.resize(mesh.size());
  state.im.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    double xi = mesh.nodes[i];
    // DFT grids omit the +Nyquist bin; it aliases onto the lowest frequency.
    if (xi > hi + tol && xi - period >= lo - tol && xi - period <= hi + tol) xi -= period;
    if (xi < lo - tol && xi + period <= hi + tol && xi + period >= lo - tol) xi += period;
    if (xi < lo - tol || xi > hi + tol)
      throw std::invalid_argument("project: mesh node outside interpolation range");
    const double pos = (xi - lo) / u0.grid.resolution;
    std::size_t j = static_cast<std::size_t>(
        std::clamp(std::floor(pos), 0.0, static_cast<double>(freqs.size() - 2)));
    const double t = std::clamp((xi - freqs[j]) / (freqs[j + 1] - freqs[j]), 0.0, 1.0);
    const std::complex<double> v = (1.0 - t) * u0.values[j] + t * u0.values[j + 1];
    state.re[i] = v.real();
    state.im[i] = v.imag();
  }
  return state;
}

FemState step(const FemSystem& sys, const FemState& state, double dt) {
  if (std::abs(dt - sys.dt) > 1e-12 * std::max(1.0, sys.dt))
    throw std::invalid_argument("step: dt differs from the factored operator's dt");
  if (state.re.size() != sys.mesh.size() || state.im.size() != sys.mesh.size())
    throw std::invalid_argument("step: state size mismatch");
  FemState next;
  next.time = state.time + dt;
  next.re.resize(state.re.size());
  next.im.resize(state.im.size());
  sys.mass.apply(state.re, next.re);
  sys.mass.apply(state.im, next.im);
  sys.implicit_op.solve_in_place(next.re);
  sys.implicit_op.solve_in_place(next.im);
  return next;
}

SpectralSnapshot to_snapshot(const FemMesh& mesh, const FemState& state) {
  SpectralSnapshot snap;
  snap.grid.freqs = mesh.nodes;
  snap.grid.resolution = mesh.h;
  snap.time = state.time;
  snap.values.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i)
    snap.values[i] = {state.re[i], state.im[i]};
  return snap;
}

SpectralTrace evolve(const FemSystem& sys, const FemState& initial, double dt,
                     std::size_t n_steps, std::size_t snapshot_every) {
  if (n_steps < 1) throw std::invalid_argument("evolve: n_steps must be >= 1");
  if (snapshot_every < 1) throw std::invalid_argument("evolve: snapshot_every must be >= 1");
  SpectralTrace trace;
  trace.snapshots.push_back(to_snapshot(sys.mesh, initial));
  FemState state = initial;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    state = step(sys, state, dt);
    if (k % snapshot_every == 0 || k == n_steps)
      trace.snapshots.push_back(to_snapshot(sys.mesh, state));
  }
  return trace;
}

double spectral_energy(const FemSystem& sys, const FemState& state) {
  return sys.mass.quadratic_form(state.re) + sys.mass.quadratic_form(state.im);
}

}  // namespace ffdyn
