// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/nn/optimizer.h"

#include <cmath>

#include "ctxmask/errors.h"

namespace ctxmask::nn {

Adam::Adam(std::size_t param_count, AdamConfig cfg)
    : cfg_(cfg), m_(param_count, 0.0), v_(param_count, 0.0) {
  if (!(cfg_.learning_rate >= 0.0))
    throw UsageError("adam: learning rate must be non-negative");
  if (!(cfg_.beta1 >= 0.0 && cfg_.beta1 < 1.0 && cfg_.beta2 >= 0.0 &&
        cfg_.beta2 < 1.0))
    throw UsageError("adam: betas must lie in [0, 1)");
  if (!(cfg_.epsilon > 0.0)) throw UsageError("adam: epsilon must be positive");
}

void Adam::Step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw UsageError("adam: parameter/gradient size mismatch");
  ++steps_;
  const double n = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(cfg_.beta1, n);
  const double correction2 = 1.0 - std::pow(cfg_.beta2, n);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g * g;
    const double m_hat = m_[i] / correction1;
    const double v_hat = v_[i] / correction2;
    params[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
  }
}

}  // namespace ctxmask::nn
