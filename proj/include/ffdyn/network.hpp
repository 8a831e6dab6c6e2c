#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <variant>

#include "ffdyn/distribution.hpp"
#include "ffdyn/grid.hpp"
#include "ffdyn/target.hpp"

namespace ffdyn {

/// Two-layer Fourier-features model (d = 1):
///   f(x) = 1/sqrt(2m) * sum_k [ a_k cos(2 pi w_k x) + b_k sin(2 pi w_k x) ].
struct NetworkParams {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd w;
  bool frozen_w = false;

  std::size_t m() const { return static_cast<std::size_t>(w.size()); }
  double forward(double x) const;
};

/// Fourier-features first layer followed by ReLU layers and a linear head,
/// NTK parameterization: every matrix is applied with a 1/sqrt(fan_in)
/// factor in the forward pass, no biases.
struct MultilayerParams {
  Eigen::VectorXd w;
  bool frozen_w = false;
  std::vector<Eigen::MatrixXd> hidden;  // hidden[0] is width x 2m, rest width x width
  Eigen::VectorXd output;

  std::size_t m() const { return static_cast<std::size_t>(w.size()); }
  std::size_t width() const { return hidden.empty() ? 0 : static_cast<std::size_t>(hidden[0].rows()); }
  double forward(double x) const;
};

using NetworkVariant = std::variant<NetworkParams, MultilayerParams>;

double forward(const NetworkVariant& params, double x);

struct TrainConfig {
  std::size_t m = 2000;
  DistributionSpec dist_w = DistributionSpec::normal(47.746482927568601);  // 300/(2 pi)
  double sigma_a = 0.031622776601683791;                                   // 2/sqrt(4000)
  double step_size = 4.1666666666666664e-08;                               // 1e-5/240
  std::size_t iterations = 10000;
  std::size_t snapshot_every = 4000;
  std::uint64_t seed = 0;
  SampleGrid grid = make_sample_grid(240, -1.0, 1.0);
  TargetSpec target = TargetSpec::rounded_sine(4.2);
  bool frozen_w = false;
  std::size_t depth = 2;         // total weight layers; 2 selects NetworkParams
  std::size_t hidden_width = 4000;
  double time_scale = 1.0;       // gradient-flow time per unit of iteration*step_size

  void validate() const;  // throws std::invalid_argument naming the field
};

/// a, b ~ Normal(0, sigma_a); w ~ dist_w; hidden/output ~ Normal(0, 1).
/// Deterministic in cfg.seed.
NetworkVariant init_network(const TrainConfig& cfg);

struct Gradients {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd w;
  std::vector<Eigen::MatrixXd> hidden;
  Eigen::VectorXd output;
};

/// Empirical risk 1/(2N) sum_i (f(x_i) - target(x_i))^2 and its exact
/// gradient. With frozen_w the w-gradient is reported as exactly zero.
double loss_and_grad(const NetworkVariant& params, const SampleGrid& grid,
                     const TargetSpec& target, Gradients* grad);

}  // namespace ffdyn
