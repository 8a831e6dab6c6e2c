#pragma once

#include <functional>
#include <vector>

#include "ffdyn/dft.hpp"
#include "ffdyn/distribution.hpp"

namespace ffdyn {

/// Coefficients of the residual-spectrum equation
///   du/dt = d/dxi( D(xi) du/dxi ) - Lambda(xi) u
/// with, for activation frequency scale c and input dimension d,
///   D(xi)      = sigma_a^2 * (c^2 / 4 pi^2) * (2 pi / c)^d * rho_sym(2 pi xi / c),
///   Lambda(xi) = (2 pi / c)^d * rho_sym(2 pi xi / c).
/// At c = 2 pi this reduces to D = sigma_a^2 rho_sym, Lambda = rho_sym.
struct CoefficientField {
  double sigma_a = 0.0;
  double c = 0.0;
  int dim = 1;
  std::function<double(double)> damping;           // Lambda(xi)
  std::function<double(double)> diffusion_weight;  // D(xi) / sigma_a^2
  std::vector<double> breakpoints;                 // jumps/kinks of the weight, xi units

  double diffusion(double xi) const { return sigma_a * sigma_a * diffusion_weight(xi); }
};

/// rho_sym(xi) = (rho(xi) + rho(-xi)) / 2.
std::function<double(double)> symmetrize_density(const DistributionSpec& dist);

CoefficientField build_coefficients(const DistributionSpec& dist, double sigma_a,
                                    double c = 6.283185307179586476925286766559,
                                    int dim = 1);

/// Field with an arbitrary nonnegative damping profile (not necessarily a
/// probability density); diffusion weight equals the profile, c = 2 pi.
CoefficientField field_from_density(std::function<double(double)> rho, double sigma_a,
                                    std::vector<double> breakpoints = {});

/// Frozen-weights closed form: values scaled pointwise by exp(-rho_w(xi) t).
SpectralSnapshot frozen_solution(const SpectralSnapshot& u0, const DistributionSpec& dist,
                                 double t);

/// frozen_solution evaluated at each requested time offset.
SpectralTrace frozen_trace(const SpectralSnapshot& u0, const DistributionSpec& dist,
                           const std::vector<double>& times);

}  // namespace ffdyn
