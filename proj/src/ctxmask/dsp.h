// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_DSP_H_
#define CTXMASK_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/grid.h"

namespace ctxmask {

inline constexpr int kSampleRateHz = 16000;

struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kSampleRateHz;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

enum class WindowKind { kHann, kHamming, kRectangular };

std::string ToString(WindowKind kind);
WindowKind ParseWindowKind(const std::string& name);

struct StftConfig {
  std::size_t frame_len = 128;
  std::size_t hop_len = 64;
  WindowKind window = WindowKind::kHann;

  std::size_t bins() const { return frame_len / 2 + 1; }
  // Throws UsageError unless 0 < hop_len <= frame_len and frame_len >= 2.
  void Validate() const;
  std::size_t FrameCount(std::size_t num_samples) const;
  double HopSeconds(int sample_rate_hz) const {
    return static_cast<double>(hop_len) / sample_rate_hz;
  }
  double FrameSeconds(int sample_rate_hz) const {
    return static_cast<double>(frame_len) / sample_rate_hz;
  }
};

// Periodic analysis window of the given length.
std::vector<double> MakeWindow(WindowKind kind, std::size_t length);

// Real-input FFT of a fixed size. Radix-2 for power-of-two sizes, direct
// DFT otherwise. Immutable after construction, safe to share across threads.
class RealFft {
 public:
  explicit RealFft(std::size_t size);

  std::size_t size() const { return size_; }
  // input: size() reals; output: size()/2 + 1 bins.
  void Forward(std::span<const double> input,
               std::span<std::complex<double>> output) const;
  // Inverse of Forward, including the 1/N scaling. Imaginary parts of the
  // DC and Nyquist bins are ignored.
  void Inverse(std::span<const std::complex<double>> input,
               std::span<double> output) const;

 private:
  void Transform(std::vector<std::complex<double>>& data, bool inverse) const;

  std::size_t size_;
  bool radix2_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;
};

// Frames that do not fully fit are dropped, so
// T = 1 + floor((len - frame_len) / hop_len).
ComplexSpectrogram Stft(const Waveform& wave, const StftConfig& cfg);

// Weighted overlap-add with the analysis window and division by the
// overlap-added squared window (floored at 1e-8). Output length is
// (T - 1) * hop_len + frame_len.
Waveform Istft(const ComplexSpectrogram& spec, const StftConfig& cfg,
               int sample_rate_hz = kSampleRateHz);

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram& spec);

struct NormalizationStats {
  double mean = 0.0;
  double std = 1.0;
};

inline constexpr double kStdFloor = 1e-8;

struct NormalizedMagnitude {
  MagnitudeSpectrogram values;
  NormalizationStats stats;
};

// Per-utterance scalar standardization over every entry of the grid.
NormalizedMagnitude Normalize(const MagnitudeSpectrogram& mag);
MagnitudeSpectrogram Denormalize(const MagnitudeSpectrogram& normalized,
                                 const NormalizationStats& stats);

}  // namespace ctxmask

#endif  // CTXMASK_DSP_H_
