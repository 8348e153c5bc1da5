// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/masking.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace ctxmask {

RatioMask::RatioMask(std::size_t frames, std::size_t bins, double fill)
    : RatioMask(RealGrid(frames, bins, fill)) {}

RatioMask::RatioMask(RealGrid values) : values_(std::move(values)) {
  for (double v : values_.values())
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw UsageError("ratio mask entries must lie in [0, 1], got " +
                       std::to_string(v));
}

CompressionBeta::CompressionBeta(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw UsageError("compression beta must lie in (0, 1], got " +
                     std::to_string(beta));
}

RatioMask IdealRatioMask(const ComplexSpectrogram& speech,
                         const ComplexSpectrogram& noise,
                         CompressionBeta beta) {
  RequireSameShape(speech, noise, "ideal_ratio_mask");
  RealGrid mask(speech.frames(), speech.bins());
  auto s = speech.values();
  auto n = noise.values();
  auto m = mask.values();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double ps = std::norm(s[i]);
    const double total = ps + std::norm(n[i]);
    if (total < kSilentPower) {
      m[i] = 0.0;
      continue;
    }
    m[i] = std::clamp(std::pow(ps / total, beta.value()), 0.0, 1.0);
  }
  return RatioMask(std::move(mask));
}

ComplexSpectrogram ApplyMask(const RatioMask& mask,
                             const ComplexSpectrogram& noisy) {
  RequireSameShape(mask.grid(), noisy, "apply_mask");
  ComplexSpectrogram out(noisy.frames(), noisy.bins());
  auto m = mask.grid().values();
  auto y = noisy.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = m[i] * y[i];
  return out;
}

double CompressedMseFlat(std::span<const double> estimate,
                         std::span<const double> target, double compression,
                         std::span<double> grad) {
  if (estimate.size() != target.size())
    throw UsageError("compressed_mse: dimension mismatch");
  if (!grad.empty() && grad.size() != estimate.size())
    throw UsageError("compressed_mse: gradient buffer size mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double e = estimate[i];
    const double s = target[i];
    if (e < 0.0 || s < 0.0)
      throw UsageError("compressed_mse: magnitudes must be non-negative");
    const double diff = std::pow(e, compression) - std::pow(s, compression);
    loss += diff * diff;
    if (!grad.empty()) {
      const double e_safe = std::max(e, kGradientMagnitudeFloor);
      grad[i] = 2.0 * diff * compression * std::pow(e_safe, compression - 1.0);
    }
  }
  return loss;
}

LossReport CompressedMse(const MagnitudeSpectrogram& estimate,
                         const MagnitudeSpectrogram& target,
                         double compression) {
  RequireSameShape(estimate, target, "compressed_mse");
  LossReport report{0.0, RealGrid(estimate.frames(), estimate.bins())};
  report.loss = CompressedMseFlat(estimate.values(), target.values(),
                                  compression, report.gradient.values());
  return report;
}

}  // namespace ctxmask
