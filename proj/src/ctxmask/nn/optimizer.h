// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_NN_OPTIMIZER_H_
#define CTXMASK_NN_OPTIMIZER_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ctxmask::nn {

struct AdamConfig {
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias-corrected first and second moment estimates.
class Adam {
 public:
  Adam(std::size_t param_count, AdamConfig cfg);

  void Step(std::span<double> params, std::span<const double> grads);

  void set_learning_rate(double lr) { cfg_.learning_rate = lr; }
  std::size_t steps() const { return steps_; }
  const AdamConfig& config() const { return cfg_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  std::size_t steps_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace ctxmask::nn

#endif  // CTXMASK_NN_OPTIMIZER_H_
