// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/dsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ctxmask {

std::string ToString(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann: return "hann";
    case WindowKind::kHamming: return "hamming";
    case WindowKind::kRectangular: return "rect";
  }
  return "hann";
}

WindowKind ParseWindowKind(const std::string& name) {
  if (name == "hann" || name == "hanning") return WindowKind::kHann;
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "rect" || name == "rectangular") return WindowKind::kRectangular;
  throw UsageError("unknown window kind: " + name);
}

void StftConfig::Validate() const {
  if (frame_len < 2) throw UsageError("stft: frame_len must be >= 2");
  if (hop_len == 0 || hop_len > frame_len)
    throw UsageError("stft: hop_len must satisfy 0 < hop_len <= frame_len");
}

std::size_t StftConfig::FrameCount(std::size_t num_samples) const {
  if (num_samples < frame_len) return 0;
  return 1 + (num_samples - frame_len) / hop_len;
}

std::vector<double> MakeWindow(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  const double n = static_cast<double>(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    switch (kind) {
      case WindowKind::kHann: w[i] = 0.5 - 0.5 * std::cos(phase); break;
      case WindowKind::kHamming: w[i] = 0.54 - 0.46 * std::cos(phase); break;
      case WindowKind::kRectangular: break;
    }
  }
  return w;
}

RealFft::RealFft(std::size_t size) : size_(size) {
  if (size_ == 0) throw UsageError("fft: size must be positive");
  radix2_ = (size_ & (size_ - 1)) == 0;
  twiddles_.resize(size_);
  for (std::size_t k = 0; k < size_; ++k)
    twiddles_[k] = std::polar(1.0, -2.0 * std::numbers::pi *
                                       static_cast<double>(k) /
                                       static_cast<double>(size_));
  if (radix2_) {
    bit_reverse_.resize(size_);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < size_) ++bits;
    for (std::size_t i = 0; i < size_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bit_reverse_[i] = r;
    }
  }
}

void RealFft::Transform(std::vector<std::complex<double>>& data,
                        bool inverse) const {
  const std::size_t n = size_;
  if (!radix2_) {
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const auto tw = twiddles_[(j * k) % n];
        acc += data[j] * (inverse ? std::conj(tw) : tw);
      }
      out[k] = acc;
    }
    data.swap(out);
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        auto tw = twiddles_[j * stride];
        if (inverse) tw = std::conj(tw);
        const auto a = data[start + j];
        const auto b = data[start + j + half] * tw;
        data[start + j] = a + b;
        data[start + j + half] = a - b;
      }
    }
  }
}

void RealFft::Forward(std::span<const double> input,
                      std::span<std::complex<double>> output) const {
  if (input.size() != size_ || output.size() != size_ / 2 + 1)
    throw UsageError("fft: buffer size mismatch");
  std::vector<std::complex<double>> buf(input.begin(), input.end());
  Transform(buf, false);
  std::copy_n(buf.begin(), output.size(), output.begin());
}

void RealFft::Inverse(std::span<const std::complex<double>> input,
                      std::span<double> output) const {
  if (output.size() != size_ || input.size() != size_ / 2 + 1)
    throw UsageError("fft: buffer size mismatch");
  const std::size_t n = size_;
  std::vector<std::complex<double>> buf(n);
  for (std::size_t k = 0; k < input.size(); ++k) buf[k] = input[k];
  buf[0] = input[0].real();
  if (n % 2 == 0) buf[n / 2] = input[n / 2].real();
  for (std::size_t k = n / 2 + 1; k < n; ++k) buf[k] = std::conj(buf[n - k]);
  Transform(buf, true);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) output[i] = buf[i].real() * scale;
}

ComplexSpectrogram Stft(const Waveform& wave, const StftConfig& cfg) {
  cfg.Validate();
  if (wave.samples.size() < cfg.frame_len)
    throw UsageError("stft: input too short (" +
                     std::to_string(wave.samples.size()) +
                     " samples, need at least " +
                     std::to_string(cfg.frame_len) + ")");
  const std::size_t frames = cfg.FrameCount(wave.samples.size());
  const std::size_t bins = cfg.bins();
  const auto window = MakeWindow(cfg.window, cfg.frame_len);
  const RealFft fft(cfg.frame_len);

  ComplexSpectrogram spec(frames, bins);
  std::vector<double> frame(cfg.frame_len);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = wave.samples.data() + t * cfg.hop_len;
    for (std::size_t i = 0; i < cfg.frame_len; ++i)
      frame[i] = src[i] * window[i];
    fft.Forward(frame, spec.row(t));
  }
  return spec;
}

Waveform Istft(const ComplexSpectrogram& spec, const StftConfig& cfg,
               int sample_rate_hz) {
  cfg.Validate();
  if (spec.bins() != cfg.bins())
    throw UsageError("istft: spectrogram has " + std::to_string(spec.bins()) +
                     " bins, frame_len " + std::to_string(cfg.frame_len) +
                     " implies " + std::to_string(cfg.bins()));
  Waveform out;
  out.sample_rate_hz = sample_rate_hz;
  if (spec.frames() == 0) return out;

  const std::size_t length = (spec.frames() - 1) * cfg.hop_len + cfg.frame_len;
  const auto window = MakeWindow(cfg.window, cfg.frame_len);
  const RealFft fft(cfg.frame_len);
  std::vector<double> accum(length, 0.0);
  std::vector<double> norm(length, 0.0);
  std::vector<double> frame(cfg.frame_len);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    fft.Inverse(spec.row(t), frame);
    const std::size_t offset = t * cfg.hop_len;
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
      accum[offset + i] += frame[i] * window[i];
      norm[offset + i] += window[i] * window[i];
    }
  }
  out.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i)
    out.samples[i] = accum[i] / std::max(norm[i], kStdFloor);
  return out;
}

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram& spec) {
  MagnitudeSpectrogram mag(spec.frames(), spec.bins());
  auto src = spec.values();
  auto dst = mag.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
  return mag;
}

NormalizedMagnitude Normalize(const MagnitudeSpectrogram& mag) {
  if (mag.empty()) throw UsageError("normalize: empty magnitude grid");
  const auto values = mag.values();
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double std = std::max(std::sqrt(sq / n), kStdFloor);

  NormalizedMagnitude out{MagnitudeSpectrogram(mag.frames(), mag.bins()),
                          {mean, std}};
  auto dst = out.values.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    dst[i] = (values[i] - mean) / std;
  return out;
}

MagnitudeSpectrogram Denormalize(const MagnitudeSpectrogram& normalized,
                                 const NormalizationStats& stats) {
  MagnitudeSpectrogram out(normalized.frames(), normalized.bins());
  auto src = normalized.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] * stats.std + stats.mean;
  return out;
}

}  // namespace ctxmask
