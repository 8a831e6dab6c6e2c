#pragma once

#include <Eigen/Core>

#include "ffdyn/network.hpp"

namespace ffdyn::detail {

Eigen::VectorXd target_values(const TargetSpec& target, const SampleGrid& grid);

/// cos/sin feature matrices over the sample grid. Built with a per-feature
/// phase recurrence: one sincos pair per feature plus one complex rotation
/// per grid point, in a fixed order.
struct FeatureBatch {
  Eigen::MatrixXd c;  // N x m, cos(2 pi w_k x_i)
  Eigen::MatrixXd s;  // N x m, sin(2 pi w_k x_i)
  void rebuild(const Eigen::VectorXd& w, const SampleGrid& grid);
};

/// Batched risk/gradient evaluation for the two-layer model. Feature matrices
/// are cached; callers invalidate after updating w.
struct TwoLayerEval {
  FeatureBatch fb;
  Eigen::VectorXd f, residual, ux;
  bool features_valid = false;

  double operator()(const NetworkParams& p, const SampleGrid& grid,
                    const Eigen::VectorXd& targets, Gradients* grad);
};

/// Batched risk/gradient evaluation for the multilayer model.
struct MultilayerEval {
  Eigen::MatrixXd z0;                 // 2m x N
  std::vector<Eigen::MatrixXd> acts;  // pre-activations
  std::vector<Eigen::MatrixXd> zs;    // post-activations
  Eigen::MatrixXd delta, delta_prev, delta0;
  Eigen::VectorXd f, residual;
  bool features_valid = false;

  double operator()(const MultilayerParams& p, const SampleGrid& grid,
                    const Eigen::VectorXd& targets, Gradients* grad);
};

}  // namespace ffdyn::detail
