// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_CONTEXT_WINDOW_H_
#define CTXMASK_CONTEXT_WINDOW_H_

#include <cstddef>
#include <vector>

#include "ctxmask/grid.h"
#include "ctxmask/masking.h"
#include "ctxmask/nn/tensor.h"

namespace ctxmask {

// Input and output context sizes in STFT frames. The output context is
// either a single frame (the most recent one) or the whole input window.
class ContextWindowConfig {
 public:
  ContextWindowConfig() = default;
  ContextWindowConfig(std::size_t w_in, std::size_t w_out);

  std::size_t w_in() const { return w_in_; }
  std::size_t w_out() const { return w_out_; }
  bool sliding() const { return w_out_ == w_in_ && w_in_ > 1; }

  friend bool operator==(const ContextWindowConfig&,
                         const ContextWindowConfig&) = default;

 private:
  std::size_t w_in_ = 1;
  std::size_t w_out_ = 1;
};

// Anything that maps a stack of context windows to mask estimates.
//
// Input is a (w_in, F, K) tensor where channel j of column k holds frame
// k + j of the utterance. Output is (w_out, F, K) with entries in [0, 1];
// for w_out == w_in channel j estimates frame k + j, for w_out == 1 the
// single channel estimates frame k + w_in - 1.
class MaskEstimator {
 public:
  virtual ~MaskEstimator() = default;
  virtual std::size_t input_context() const = 0;
  virtual std::size_t output_context() const = 0;
  virtual std::size_t bins() const = 0;
  virtual nn::Tensor EstimateWindows(const nn::Tensor& windows) const = 0;
};

// K = T - w + 1 windows of w consecutive frames, window k (0-based) covering
// frames k .. k + w - 1. Throws UsageError when T < w.
std::vector<RealGrid> FrameWindows(const RealGrid& features, std::size_t w);

// The same windows packed as a (w, F, K) network input.
nn::Tensor StackWindows(const RealGrid& features, std::size_t w);

// Per-window estimates before recombination. estimates[k] is a w x F grid
// whose row j refers to utterance frame k + j.
struct WindowedEstimates {
  std::size_t window = 0;
  std::size_t bins = 0;
  std::vector<RealGrid> estimates;

  // Unpacks a (w, F, K) estimator output.
  static WindowedEstimates FromTensor(const nn::Tensor& out);
};

// First and one-past-last window index (0-based) covering frame t.
struct CoveringWindows {
  std::size_t first;
  std::size_t last;
  std::size_t count() const { return last - first; }
};
CoveringWindows WindowsCovering(std::size_t t, std::size_t frames,
                                std::size_t w);

// Averages every estimate of frame t over the windows that contain it:
// k in [max(0, t - w + 1), min(t, T - w)]. Sums run in ascending k and are
// divided once, so the warm-up (t < w - 1), steady-state and tail regimes
// need no special cases.
RatioMask Combine(const WindowedEstimates& est, std::size_t frames,
                  std::size_t w);

// Extra algorithmic latency of a w-frame context: (w - 1) * hop seconds.
double LatencySeconds(std::size_t w, double hop_seconds);

// Estimates a full-length mask for normalized features using the estimator
// in either sliding (w_out == w_in, estimates averaged by Combine) or
// last-frame (w_out == 1) mode. In last-frame mode the first w_in - 1 frames
// come from window 0: its own positions when the estimator emits whole
// windows, otherwise its single estimate repeated.
RatioMask RunSlidingInference(const MaskEstimator& estimator,
                              const RealGrid& features,
                              const ContextWindowConfig& cfg);

}  // namespace ctxmask

#endif  // CTXMASK_CONTEXT_WINDOW_H_
