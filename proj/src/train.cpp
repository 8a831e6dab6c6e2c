#include "ffdyn/train.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "batch_eval.hpp"

namespace ffdyn {

namespace {

void record_snapshot(ResidualTrace& trace, const TrainConfig& cfg, std::size_t iter,
                     const Eigen::VectorXd& residual) {
  std::span<const double> view(residual.data(), static_cast<std::size_t>(residual.size()));
  SpectralSnapshot snap = dft_forward(cfg.grid, view);
  snap.time = static_cast<double>(iter) * cfg.step_size * cfg.time_scale;
  trace.spectra.snapshots.push_back(std::move(snap));
  trace.iterations.push_back(iter);
}

}  // namespace

ResidualTrace train(const TrainConfig& cfg) {
  cfg.validate();
  NetworkVariant params = init_network(cfg);
  const Eigen::VectorXd targets = detail::target_values(cfg.target, cfg.grid);

  detail::TwoLayerEval eval2;
  detail::MultilayerEval evalN;
  Gradients grads;
  ResidualTrace trace;

  auto evaluate = [&](Gradients* g) -> std::pair<double, const Eigen::VectorXd*> {
    if (auto* p = std::get_if<NetworkParams>(&params))
      return {eval2(*p, cfg.grid, targets, g), &eval2.residual};
    auto& p = std::get<MultilayerParams>(params);
    return {evalN(p, cfg.grid, targets, g), &evalN.residual};
  };

  auto apply_update = [&](const Gradients& g) {
    const double eta = cfg.step_size;
    if (auto* p = std::get_if<NetworkParams>(&params)) {
      p->a -= eta * g.a;
      p->b -= eta * g.b;
      if (!p->frozen_w) {
        p->w -= eta * g.w;
        eval2.features_valid = false;
      }
      return;
    }
    auto& p = std::get<MultilayerParams>(params);
    for (std::size_t l = 0; l < p.hidden.size(); ++l) p.hidden[l] -= eta * g.hidden[l];
    p.output -= eta * g.output;
    if (!p.frozen_w) {
      p.w -= eta * g.w;
      evalN.features_valid = false;
    }
  };

  for (std::size_t iter = 0;; ++iter) {
    const bool last = iter == cfg.iterations;
    auto [risk, residual] = evaluate(last ? nullptr : &grads);
    if (!std::isfinite(risk))
      throw std::runtime_error("training diverged: non-finite risk at iteration " +
                               std::to_string(iter));
    if (iter % cfg.snapshot_every == 0 || last) record_snapshot(trace, cfg, iter, *residual);
    if (last) {
      trace.final_risk = risk;
      break;
    }
    apply_update(grads);
  }
  return trace;
}

}  // namespace ffdyn
