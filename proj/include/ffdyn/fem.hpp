#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ffdyn/dft.hpp"
#include "ffdyn/pde.hpp"

namespace ffdyn {

/// Uniform P1 mesh on [a, b] with homogeneous (natural) Neumann conditions.
struct FemMesh {
  double a = 0.0;
  double b = 0.0;
  double h = 0.0;
  std::vector<double> nodes;

  std::size_t size() const { return nodes.size(); }
};

FemMesh build_mesh(double a, double b, double h);

/// Symmetric tridiagonal matrix: diag[i] on the diagonal, off[i] coupling
/// nodes i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
  void apply(std::span<const double> x, std::span<double> y) const;
  double quadratic_form(std::span<const double> x) const;  // x^T A x
};

/// Thomas factorization, reusable across right-hand sides.
class TridiagonalFactor {
 public:
  TridiagonalFactor() = default;
  explicit TridiagonalFactor(const Tridiagonal& m);
  void solve_in_place(std::span<double> rhs) const;
  std::size_t size() const { return inv_piv_.size(); }

 private:
  std::vector<double> inv_piv_;  // 1 / pivot_i
  std::vector<double> upper_;    // scaled superdiagonal
  std::vector<double> off_;      // original subdiagonal
};

/// Assembled matrices of the variational problem
///   L c'(t) = -sigma_a^2 M c(t) - N c(t)
/// with (L)ij = ∫ phi_j phi_i, (M)ij = ∫ w phi_j' phi_i', (N)ij = ∫ w phi_j phi_i
/// for the coefficient weight w, plus the backward-Euler operator
///   A = L + dt sigma_a^2 M + dt N, factored once for a fixed dt.
struct FemSystem {
  FemMesh mesh;
  Tridiagonal mass;         // L
  Tridiagonal stiffness;    // M
  Tridiagonal damped_mass;  // N
  double sigma_a = 0.0;
  double dt = 0.0;
  TridiagonalFactor implicit_op;
};

FemSystem assemble(const FemMesh& mesh, const CoefficientField& coeffs, double dt);

/// Nodal coefficients of the P1 expansion, real and imaginary parts.
struct FemState {
  std::vector<double> re;
  std::vector<double> im;
  double time = 0.0;
};

/// Nodal interpolation of u0 onto the mesh. Frequencies must cover the mesh;
/// the one-bin periodic wrap at the upper Nyquist node is filled from the
/// matching negative frequency.
FemState project_initial(const SpectralSnapshot& u0, const FemMesh& mesh);

/// One backward-Euler step; dt must match the factored operator.
FemState step(const FemSystem& sys, const FemState& state, double dt);

/// n_steps backward-Euler steps, recording the initial state, every
/// snapshot_every-th step, and the final step.
SpectralTrace evolve(const FemSystem& sys, const FemState& initial, double dt,
                     std::size_t n_steps, std::size_t snapshot_every);

/// Discrete energy c^H L c (real plus imaginary part).
double spectral_energy(const FemSystem& sys, const FemState& state);

SpectralSnapshot to_snapshot(const FemMesh& mesh, const FemState& state);

}  // namespace ffdyn
