// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_MASKING_H_
#define CTXMASK_MASKING_H_

#include "ctxmask/grid.h"

namespace ctxmask {

// Real-valued T x F soft mask with every entry in [0, 1].
class RatioMask {
 public:
  RatioMask() = default;
  RatioMask(std::size_t frames, std::size_t bins, double fill = 0.0);
  // Validates range and finiteness.
  explicit RatioMask(RealGrid values);

  const RealGrid& grid() const { return values_; }
  std::size_t frames() const { return values_.frames(); }
  std::size_t bins() const { return values_.bins(); }
  double operator()(std::size_t t, std::size_t f) const { return values_(t, f); }

  friend bool operator==(const RatioMask&, const RatioMask&) = default;

 private:
  RealGrid values_;
};

// Compression exponent applied to the power ratio, restricted to (0, 1].
class CompressionBeta {
 public:
  explicit CompressionBeta(double beta = 0.5);
  double value() const { return beta_; }

 private:
  double beta_;
};

// Bins whose combined power falls below this are treated as silent (mask 0).
inline constexpr double kSilentPower = 1e-12;

// M = (|S|^2 / (|S|^2 + |N|^2))^beta elementwise.
RatioMask IdealRatioMask(const ComplexSpectrogram& speech,
                         const ComplexSpectrogram& noise,
                         CompressionBeta beta = CompressionBeta());

// S_hat = M (.) Y. Only the magnitude changes; the noisy phase is kept.
ComplexSpectrogram ApplyMask(const RatioMask& mask,
                             const ComplexSpectrogram& noisy);

struct LossReport {
  double loss = 0.0;
  // d loss / d |S_hat|, same shape as the inputs.
  RealGrid gradient;
};

inline constexpr double kDefaultLossCompression = 0.3;
inline constexpr double kGradientMagnitudeFloor = 1e-8;

// Sum over bins of (S_hat^c - S^c)^2. The windowed variant is the same sum
// over the flattened window axis, which CompressedMseFlat covers.
LossReport CompressedMse(const MagnitudeSpectrogram& estimate,
                         const MagnitudeSpectrogram& target,
                         double compression = kDefaultLossCompression);

// Flat-buffer form used by the trainer. grad may be empty to skip the
// gradient; otherwise it must match the input length and is overwritten.
double CompressedMseFlat(std::span<const double> estimate,
                         std::span<const double> target, double compression,
                         std::span<double> grad);

}  // namespace ctxmask

#endif  // CTXMASK_MASKING_H_
