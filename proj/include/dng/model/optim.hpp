#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dng/core/error.hpp"
#include "dng/core/matrix.hpp"
#include "dng/model/params.hpp"

namespace dng::model {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;

  bool operator==(const AdamConfig&) const = default;
};

struct OptimState {
  AdamConfig hyper;
  std::uint64_t step = 0;
  ModelParams first_moment;
  ModelParams second_moment;

  bool operator==(const OptimState&) const = default;
};

inline OptimState init_optim(const ModelParams& params, const AdamConfig& hyper = {}) {
  return {hyper, 0, zeros_like(params), zeros_like(params)};
}

// Decoupled weight decay, then a bias-corrected Adam step. `step` is the
// 1-based index of this update.
inline void adam_update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v,
                        std::uint64_t step, const AdamConfig& hyper, double lr) {
  param.require_same_shape(grad, "adam_update");
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
  auto p = param.values();
  auto g = grad.values();
  auto mv = m.values();
  auto vv = v.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] -= lr * hyper.weight_decay * p[i];
    mv[i] = hyper.beta1 * mv[i] + (1.0 - hyper.beta1) * g[i];
    vv[i] = hyper.beta2 * vv[i] + (1.0 - hyper.beta2) * g[i] * g[i];
    const double m_hat = mv[i] / c1;
    const double v_hat = vv[i] / c2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

inline void adam_update(ModelParams& params, const ModelParams& grads, OptimState& optim,
                        double lr) {
  ++optim.step;
  auto p = params.tensors();
  auto g = grads.tensors();
  auto m = optim.first_moment.tensors();
  auto v = optim.second_moment.tensors();
  for (std::size_t k = 0; k < ModelParams::kTensorCount; ++k) {
    adam_update(*p[k], *g[k], *m[k], *v[k], optim.step, optim.hyper, lr);
  }
}

// Linear warmup from 0 to `peak` over `warmup_steps`, then linear decline to 0
// at `total_steps`.
struct LinearWarmupSchedule {
  double peak = 3e-3;
  std::uint64_t warmup_steps = 100;
  std::uint64_t total_steps = 1000;

  double at(std::uint64_t step) const {
    if (warmup_steps > 0 && step <= warmup_steps) {
      return peak * static_cast<double>(step) / static_cast<double>(warmup_steps);
    }
    if (step >= total_steps) return 0.0;
    const double span = static_cast<double>(total_steps - warmup_steps);
    return peak * static_cast<double>(total_steps - step) / span;
  }
};

}  // namespace dng::model
