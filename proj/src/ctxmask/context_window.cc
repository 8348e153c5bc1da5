// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/context_window.h"

#include <algorithm>
#include <string>

namespace ctxmask {

ContextWindowConfig::ContextWindowConfig(std::size_t w_in, std::size_t w_out)
    : w_in_(w_in), w_out_(w_out) {
  if (w_in_ < 1) throw UsageError("context: w_in must be >= 1");
  if (w_out_ != 1 && w_out_ != w_in_)
    throw UsageError("context: w_out must be 1 or equal to w_in (got w_in=" +
                     std::to_string(w_in_) + ", w_out=" +
                     std::to_string(w_out_) + ")");
}

namespace {

void RequireFits(std::size_t frames, std::size_t w) {
  if (w < 1) throw UsageError("context: window must be >= 1");
  if (frames < w)
    throw UsageError("sequence shorter than window (" + std::to_string(frames) +
                     " frames, window " + std::to_string(w) + ")");
}

}  // namespace

std::vector<RealGrid> FrameWindows(const RealGrid& features, std::size_t w) {
  RequireFits(features.frames(), w);
  const std::size_t count = features.frames() - w + 1;
  std::vector<RealGrid> windows;
  windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RealGrid win(w, features.bins());
    for (std::size_t j = 0; j < w; ++j)
      std::ranges::copy(features.row(k + j), win.row(j).begin());
    windows.push_back(std::move(win));
  }
  return windows;
}

nn::Tensor StackWindows(const RealGrid& features, std::size_t w) {
  RequireFits(features.frames(), w);
  const std::size_t count = features.frames() - w + 1;
  const std::size_t bins = features.bins();
  auto out = nn::Tensor::Zeros(w, bins, count);
  for (std::size_t j = 0; j < w; ++j)
    for (std::size_t f = 0; f < bins; ++f) {
      double* dst = out.row(j, f);
      for (std::size_t k = 0; k < count; ++k) dst[k] = features(k + j, f);
    }
  return out;
}

WindowedEstimates WindowedEstimates::FromTensor(const nn::Tensor& out) {
  if (out.rank() != 3) throw UsageError("windowed estimates: need rank 3");
  WindowedEstimates est{out.channels(), out.bins(), {}};
  est.estimates.reserve(out.frames());
  for (std::size_t k = 0; k < out.frames(); ++k) {
    RealGrid g(est.window, est.bins);
    for (std::size_t j = 0; j < est.window; ++j)
      for (std::size_t f = 0; f < est.bins; ++f) g(j, f) = out.at(j, f, k);
    est.estimates.push_back(std::move(g));
  }
  return est;
}

CoveringWindows WindowsCovering(std::size_t t, std::size_t frames,
                                std::size_t w) {
  const std::size_t first = t + 1 >= w ? t + 1 - w : 0;
  const std::size_t last = std::min(t, frames - w) + 1;
  return {first, last};
}

RatioMask Combine(const WindowedEstimates& est, std::size_t frames,
                  std::size_t w) {
  RequireFits(frames, w);
  if (est.window != w)
    throw UsageError("combine: estimates have window " +
                     std::to_string(est.window) + ", expected " +
                     std::to_string(w));
  if (est.estimates.size() != frames - w + 1)
    throw UsageError("combine: expected " + std::to_string(frames - w + 1) +
                     " windows, got " + std::to_string(est.estimates.size()));
  for (const auto& g : est.estimates)
    if (!g.SameShape(w, est.bins))
      throw UsageError("combine: window shape mismatch");

  RealGrid out(frames, est.bins);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto cover = WindowsCovering(t, frames, w);
    auto dst = out.row(t);
    for (std::size_t k = cover.first; k < cover.last; ++k) {
      auto src = est.estimates[k].row(t - k);
      for (std::size_t f = 0; f < est.bins; ++f) dst[f] += src[f];
    }
    const double count = static_cast<double>(cover.count());
    for (double& v : dst) v /= count;
  }
  return RatioMask(std::move(out));
}

double LatencySeconds(std::size_t w, double hop_seconds) {
  if (w < 1) throw UsageError("latency: window must be >= 1");
  if (!(hop_seconds > 0.0)) throw UsageError("latency: hop must be positive");
  return static_cast<double>(w - 1) * hop_seconds;
}

RatioMask RunSlidingInference(const MaskEstimator& estimator,
                              const RealGrid& features,
                              const ContextWindowConfig& cfg) {
  const std::size_t w = cfg.w_in();
  if (estimator.input_context() != w)
    throw UsageError("inference: estimator expects w_in=" +
                     std::to_string(estimator.input_context()) + ", got " +
                     std::to_string(w));
  if (estimator.bins() != features.bins())
    throw UsageError("inference: estimator expects " +
                     std::to_string(estimator.bins()) + " bins, got " +
                     std::to_string(features.bins()));
  const std::size_t model_out = estimator.output_context();
  if (cfg.w_out() > model_out)
    throw UsageError("inference: estimator emits " + std::to_string(model_out) +
                     " frames per window, cannot run w_out=" +
                     std::to_string(cfg.w_out()));

  const std::size_t frames = features.frames();
  const nn::Tensor out = estimator.EstimateWindows(StackWindows(features, w));
  if (out.rank() != 3 || out.channels() != model_out ||
      out.bins() != features.bins() || out.frames() != frames - w + 1)
    throw UsageError("inference: estimator returned shape " +
                     out.ShapeString());

  if (cfg.w_out() == w && model_out == w)
    return Combine(WindowedEstimates::FromTensor(out), frames, w);

  // Last-frame mode: window k's newest estimate is frame k + w - 1.
  const std::size_t last = model_out - 1;
  RealGrid mask(frames, features.bins());
  for (std::size_t k = 0; k + w - 1 < frames; ++k)
    for (std::size_t f = 0; f < features.bins(); ++f)
      mask(k + w - 1, f) = out.at(last, f, k);
  for (std::size_t t = 0; t + 1 < w; ++t)
    for (std::size_t f = 0; f < features.bins(); ++f)
      mask(t, f) = model_out == w ? out.at(t, f, 0) : out.at(last, f, 0);
  return RatioMask(std::move(mask));
}

}  // namespace ctxmask
