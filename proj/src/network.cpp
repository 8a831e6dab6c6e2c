#include "ffdyn/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "batch_eval.hpp"
#include "ffdyn/rng.hpp"

namespace ffdyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double NetworkParams::forward(double x) const {
  const auto mm = static_cast<Eigen::Index>(m());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < mm; ++k) {
    const double phase = kTwoPi * w[k] * x;
    acc += a[k] * std::cos(phase) + b[k] * std::sin(phase);
  }
  return acc / std::sqrt(2.0 * static_cast<double>(m()));
}

double MultilayerParams::forward(double x) const {
  const auto mm = static_cast<Eigen::Index>(m());
  Eigen::VectorXd z(2 * mm);
  for (Eigen::Index k = 0; k < mm; ++k) {
    const double phase = kTwoPi * w[k] * x;
    z[k] = std::cos(phase);
    z[mm + k] = std::sin(phase);
  }
  for (std::size_t l = 0; l < hidden.size(); ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(hidden[l].cols()));
    z = (scale * (hidden[l] * z)).cwiseMax(0.0).eval();
  }
  return output.dot(z) / std::sqrt(static_cast<double>(output.size()));
}

double forward(const NetworkVariant& params, double x) {
  return std::visit([x](const auto& p) { return p.forward(x); }, params);
}

void TrainConfig::validate() const {
  if (m < 1) throw std::invalid_argument("train config: m must be >= 1");
  if (iterations < 1) throw std::invalid_argument("train config: iterations must be >= 1");
  if (snapshot_every < 1)
    throw std::invalid_argument("train config: snapshot_every must be >= 1");
  if (!(sigma_a > 0.0)) throw std::invalid_argument("train config: sigma_a must be > 0");
  if (!(step_size >= 0.0)) throw std::invalid_argument("train config: step_size must be >= 0");
  if (grid.n < 1 || grid.points.size() != grid.n)
    throw std::invalid_argument("train config: invalid sample grid");
  if (depth < 2) throw std::invalid_argument("train config: depth must be >= 2");
  if (depth > 2 && hidden_width < 1)
    throw std::invalid_argument("train config: hidden_width must be >= 1");
  if (!(time_scale > 0.0)) throw std::invalid_argument("train config: time_scale must be > 0");
}

NetworkVariant init_network(const TrainConfig& cfg) {
  cfg.validate();
  const auto m = static_cast<Eigen::Index>(cfg.m);
  std::vector<double> w = cfg.dist_w.sample(cfg.m, derive_seed(cfg.seed, 2));
  Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(w.data(), m);

  if (cfg.depth == 2) {
    NetworkParams p;
    p.w = std::move(wv);
    p.frozen_w = cfg.frozen_w;
    SplitMix64 ra(derive_seed(cfg.seed, 0));
    SplitMix64 rb(derive_seed(cfg.seed, 1));
    p.a.resize(m);
    p.b.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) p.a[k] = cfg.sigma_a * ra.next_normal();
    for (Eigen::Index k = 0; k < m; ++k) p.b[k] = cfg.sigma_a * rb.next_normal();
    return p;
  }

  MultilayerParams p;
  p.w = std::move(wv);
  p.frozen_w = cfg.frozen_w;
  const auto q = static_cast<Eigen::Index>(cfg.hidden_width);
  const std::size_t n_hidden = cfg.depth - 2;
  p.hidden.reserve(n_hidden);
  for (std::size_t l = 0; l < n_hidden; ++l) {
    const Eigen::Index fan_in = l == 0 ? 2 * m : q;
    SplitMix64 rng(derive_seed(cfg.seed, 3 + l));
    Eigen::MatrixXd h(q, fan_in);
    for (Eigen::Index j = 0; j < fan_in; ++j)
      for (Eigen::Index i = 0; i < q; ++i) h(i, j) = rng.next_normal();
    p.hidden.push_back(std::move(h));
  }
  SplitMix64 ro(derive_seed(cfg.seed, 3 + n_hidden));
  p.output.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) p.output[i] = ro.next_normal();
  return p;
}

double loss_and_grad(const NetworkVariant& params, const SampleGrid& grid,
                     const TargetSpec& target, Gradients* grad) {
  if (grid.n < 1) throw std::invalid_argument("loss_and_grad: empty grid");
  const Eigen::VectorXd targets = detail::target_values(target, grid);
  if (const auto* p = std::get_if<NetworkParams>(&params)) {
    detail::TwoLayerEval eval;
    return eval(*p, grid, targets, grad);
  }
  detail::MultilayerEval eval;
  return eval(std::get<MultilayerParams>(params), grid, targets, grad);
}

namespace detail {

Eigen::VectorXd target_values(const TargetSpec& target, const SampleGrid& grid) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i)
    v[static_cast<Eigen::Index>(i)] = target(grid.points[i]);
  return v;
}

void FeatureBatch::rebuild(const Eigen::VectorXd& w, const SampleGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  const auto m = w.size();
  c.resize(n, m);
  s.resize(n, m);
  const double dx = grid.spacing();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double step = kTwoPi * w[k] * dx;
    const double rc = std::cos(step), rs = std::sin(step);
    double cur_c = std::cos(kTwoPi * w[k] * grid.a);
    double cur_s = std::sin(kTwoPi * w[k] * grid.a);
    for (Eigen::Index i = 0; i < n; ++i) {
      c(i, k) = cur_c;
      s(i, k) = cur_s;
      const double next_c = cur_c * rc - cur_s * rs;
      cur_s = cur_s * rc + cur_c * rs;
      cur_c = next_c;
    }
  }
}

double TwoLayerEval::operator()(const NetworkParams& p, const SampleGrid& grid,
                                const Eigen::VectorXd& targets, Gradients* grad) {
  if (!features_valid) {
    fb.rebuild(p.w, grid);
    features_valid = true;
  }
  const auto n = static_cast<Eigen::Index>(grid.n);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(p.m()));
  f.noalias() = fb.c * p.a;
  f.noalias() += fb.s * p.b;
  f *= scale;
  residual = f - targets;
  const double risk = 0.5 * residual.squaredNorm() / static_cast<double>(n);
  if (grad) {
    const double gs = scale / static_cast<double>(n);
    grad->a.noalias() = gs * (fb.c.transpose() * residual);
    grad->b.noalias() = gs * (fb.s.transpose() * residual);
    if (p.frozen_w) {
      grad->w = Eigen::VectorXd::Zero(p.w.size());
    } else {
      ux = residual.cwiseProduct(
          Eigen::Map<const Eigen::VectorXd>(grid.points.data(), n));
      grad->w = kTwoPi * gs *
                (p.b.cwiseProduct(fb.c.transpose() * ux) -
                 p.a.cwiseProduct(fb.s.transpose() * ux));
    }
    grad->hidden.clear();
    grad->output.resize(0);
  }
  return risk;
}

double MultilayerEval::operator()(const MultilayerParams& p, const SampleGrid& grid,
                                  const Eigen::VectorXd& targets, Gradients* grad) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  const auto m = static_cast<Eigen::Index>(p.m());
  if (!features_valid) {
    z0.resize(2 * m, n);
    const double dx = grid.spacing();
    for (Eigen::Index k = 0; k < m; ++k) {
      const double step = kTwoPi * p.w[k] * dx;
      const double rc = std::cos(step), rs = std::sin(step);
      double cur_c = std::cos(kTwoPi * p.w[k] * grid.a);
      double cur_s = std::sin(kTwoPi * p.w[k] * grid.a);
      for (Eigen::Index i = 0; i < n; ++i) {
        z0(k, i) = cur_c;
        z0(m + k, i) = cur_s;
        const double next_c = cur_c * rc - cur_s * rs;
        cur_s = cur_s * rc + cur_c * rs;
        cur_c = next_c;
      }
    }
    features_valid = true;
  }

  const std::size_t layers = p.hidden.size();
  acts.resize(layers);
  zs.resize(layers);
  const Eigen::MatrixXd* prev = &z0;
  for (std::size_t l = 0; l < layers; ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(p.hidden[l].cols()));
    acts[l].noalias() = scale * (p.hidden[l] * (*prev));
    zs[l] = acts[l].cwiseMax(0.0);
    prev = &zs[l];
  }
  const double out_scale = 1.0 / std::sqrt(static_cast<double>(p.output.size()));
  f.noalias() = out_scale * (prev->transpose() * p.output);
  residual = f - targets;
  const double risk = 0.5 * residual.squaredNorm() / static_cast<double>(n);
  if (!grad) return risk;

  const Eigen::VectorXd dy = residual / static_cast<double>(n);
  grad->output.noalias() = out_scale * (zs.back() * dy);
  delta.noalias() = out_scale * (p.output * dy.transpose());
  delta.array() *= (acts.back().array() > 0.0).cast<double>();

  grad->hidden.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(p.hidden[l].cols()));
    const Eigen::MatrixXd& below = l == 0 ? z0 : zs[l - 1];
    grad->hidden[l].noalias() = scale * (delta * below.transpose());
    if (l > 0) {
      delta_prev.noalias() = scale * (p.hidden[l].transpose() * delta);
      delta_prev.array() *= (acts[l - 1].array() > 0.0).cast<double>();
      delta.swap(delta_prev);
    } else {
      delta0.noalias() = scale * (p.hidden[0].transpose() * delta);
    }
  }

  if (p.frozen_w) {
    grad->w = Eigen::VectorXd::Zero(m);
  } else {
    const auto x = Eigen::Map<const Eigen::VectorXd>(grid.points.data(), n);
    grad->w.noalias() =
        kTwoPi * ((delta0.bottomRows(m).cwiseProduct(z0.topRows(m)) -
                   delta0.topRows(m).cwiseProduct(z0.bottomRows(m))) *
                  x);
  }
  grad->a.resize(0);
  grad->b.resize(0);
  return risk;
}

}  // namespace detail
}  // namespace ffdyn
