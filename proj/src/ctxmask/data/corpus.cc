// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/data/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ctxmask/data/pipeline.h"
#include "ctxmask/errors.h"
#include "ctxmask/wav_io.h"

namespace ctxmask::data {
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRate = kSampleRateHz;

std::size_t Samples(double seconds) {
  return static_cast<std::size_t>(std::llround(seconds * kRate));
}

void ScalePeak(std::vector<double>& x, double target) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : x) v *= target / peak;
}

struct Formants {
  double f[3];
  double bw[3];
  double gain[3];
};

Formants DrawFormants(Rng& rng) {
  return {{rng.Uniform(300, 850), rng.Uniform(850, 2400), rng.Uniform(2300, 3300)},
          {rng.Uniform(60, 120), rng.Uniform(80, 180), rng.Uniform(120, 250)},
          {1.0, rng.Uniform(0.4, 0.9), rng.Uniform(0.15, 0.5)}};
}

double Envelope(const Formants& a, const Formants& b, double mix, double freq) {
  double amp = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double fc = a.f[i] + (b.f[i] - a.f[i]) * mix;
    const double bw = a.bw[i] + (b.bw[i] - a.bw[i]) * mix;
    const double g = a.gain[i] + (b.gain[i] - a.gain[i]) * mix;
    const double x = (freq - fc) / bw;
    amp += g / (1.0 + x * x);
  }
  return amp / (1.0 + freq / 800.0);
}

// Adds one voiced syllable starting at `start`.
void AddSyllable(Rng& rng, std::vector<double>& out, std::size_t start,
                 std::size_t length, double f0_base, Formants& prev) {
  constexpr std::size_t kBlock = 32;
  const Formants next = DrawFormants(rng);
  const double f0_start = f0_base * rng.Uniform(0.9, 1.15);
  const double f0_end = f0_base * rng.Uniform(0.8, 1.1);
  const double level = rng.Uniform(0.5, 1.0);
  const std::size_t attack = std::min(length / 3, Samples(0.02));
  const std::size_t release = std::min(length / 3, Samples(0.045));
  double phase = rng.Uniform(0.0, kTwoPi);
  std::vector<double> amps;
  for (std::size_t i = 0; i < length && start + i < out.size(); ++i) {
    const double pos = static_cast<double>(i) / static_cast<double>(length);
    const double f0 = f0_start + (f0_end - f0_start) * pos;
    if (i % kBlock == 0) {
      const double mix = std::min(1.0, pos * 2.5);
      const std::size_t harmonics =
          static_cast<std::size_t>(std::floor(7000.0 / f0));
      amps.resize(harmonics);
      for (std::size_t h = 0; h < harmonics; ++h)
        amps[h] = Envelope(prev, next, mix, f0 * static_cast<double>(h + 1));
    }
    phase += kTwoPi * f0 / kRate;
    if (phase > kTwoPi) phase -= kTwoPi;
    double v = 0.0;
    for (std::size_t h = 0; h < amps.size(); ++h)
      v += amps[h] * std::sin(static_cast<double>(h + 1) * phase);
    double gain = level;
    if (i < attack) gain *= std::sin(0.5 * std::numbers::pi * i / attack);
    if (length - i <= release)
      gain *= std::sin(0.5 * std::numbers::pi * (length - i) / release);
    out[start + i] += gain * (v + 0.02 * rng.Gaussian());
  }
  prev = next;
}

void AddFricative(Rng& rng, std::vector<double>& out, std::size_t start,
                  std::size_t length) {
  const double level = rng.Uniform(0.08, 0.25);
  double prev = 0.0;
  for (std::size_t i = 0; i < length && start + i < out.size(); ++i) {
    const double x = rng.Gaussian();
    const double hp = x - 0.95 * prev;
    prev = x;
    const double pos = static_cast<double>(i) / static_cast<double>(length);
    out[start + i] += level * hp * std::sin(std::numbers::pi * pos);
  }
}

}  // namespace

std::string ToString(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kBrown: return "brown";
    case NoiseKind::kHum: return "hum";
    case NoiseKind::kBabble: return "babble";
    case NoiseKind::kModulated: return "modulated";
    case NoiseKind::kBand: return "band";
    case NoiseKind::kBeeps: return "beeps";
  }
  return "?";
}

Waveform SynthesizeSpeech(Rng& rng, double duration_s) {
  std::vector<double> out(Samples(duration_s), 0.0);
  const double f0_base = rng.Uniform(90.0, 230.0);
  Formants formants = DrawFormants(rng);
  std::size_t cursor = Samples(rng.Uniform(0.05, 0.2));
  while (cursor < out.size()) {
    if (rng.Uniform() < 0.35) {
      const std::size_t fric = Samples(rng.Uniform(0.04, 0.12));
      AddFricative(rng, out, cursor, fric);
      cursor += fric;
    }
    const std::size_t syllable = Samples(rng.Uniform(0.12, 0.35));
    AddSyllable(rng, out, cursor, syllable, f0_base, formants);
    cursor += syllable;
    const double pause = rng.Uniform() < 0.15 ? rng.Uniform(0.3, 0.6)
                                               : rng.Uniform(0.03, 0.2);
    cursor += Samples(pause);
  }
  ScalePeak(out, 0.8);
  return {std::move(out), kSampleRateHz};
}

Waveform SynthesizeNoise(Rng& rng, NoiseKind kind, double duration_s) {
  const std::size_t n = Samples(duration_s);
  std::vector<double> out(n, 0.0);
  switch (kind) {
    case NoiseKind::kWhite:
      for (double& v : out) v = rng.Gaussian();
      break;
    case NoiseKind::kPink: {
      // Paul Kellet's pinking filter.
      double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
      for (double& v : out) {
        const double w = rng.Gaussian();
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        v = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
        b6 = w * 0.115926;
      }
      break;
    }
    case NoiseKind::kBrown: {
      double y = 0.0;
      for (double& v : out) {
        y = 0.995 * y + 0.1 * rng.Gaussian();
        v = y;
      }
      break;
    }
    case NoiseKind::kHum: {
      const double mains = rng.Uniform() < 0.5 ? 50.0 : 60.0;
      double phases[12];
      for (double& p : phases) p = rng.Uniform(0.0, kTwoPi);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kRate;
        double v = 0.0;
        for (int h = 1; h <= 12; ++h)
          v += std::sin(kTwoPi * mains * h * t + phases[h - 1]) / h;
        out[i] = v + 0.05 * rng.Gaussian();
      }
      break;
    }
    case NoiseKind::kBabble: {
      for (int talker = 0; talker < 5; ++talker) {
        const Waveform s = SynthesizeSpeech(rng, duration_s);
        for (std::size_t i = 0; i < n; ++i) out[i] += s.samples[i];
      }
      break;
    }
    case NoiseKind::kModulated: {
      const double rate = rng.Uniform(0.5, 4.0);
      const double phase = rng.Uniform(0.0, kTwoPi);
      double lp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        lp = 0.7 * lp + 0.3 * rng.Gaussian();
        const double t = static_cast<double>(i) / kRate;
        out[i] = lp * (0.55 + 0.45 * std::sin(kTwoPi * rate * t + phase));
      }
      break;
    }
    case NoiseKind::kBand: {
      // Two-pole resonator on white noise.
      const double fc = rng.Uniform(300.0, 4000.0);
      const double r = 1.0 - kTwoPi * (fc / rng.Uniform(2.0, 8.0)) / kRate / 2.0;
      const double a1 = 2.0 * r * std::cos(kTwoPi * fc / kRate);
      const double a2 = -r * r;
      double y1 = 0.0, y2 = 0.0;
      for (double& v : out) {
        const double y = rng.Gaussian() + a1 * y1 + a2 * y2;
        y2 = y1;
        y1 = y;
        v = y;
      }
      break;
    }
    case NoiseKind::kBeeps: {
      const double tone = rng.Uniform(800.0, 3000.0);
      const double period = rng.Uniform(0.3, 1.0);
      const double duty = rng.Uniform(0.2, 0.6);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kRate;
        const bool on = std::fmod(t, period) < duty * period;
        out[i] = (on ? std::sin(kTwoPi * tone * t) : 0.0) + 0.03 * rng.Gaussian();
      }
      break;
    }
  }
  ScalePeak(out, 0.8);
  return {std::move(out), kSampleRateHz};
}

std::string WriteCorpus(const std::string& dir, std::uint64_t seed,
                        const CorpusSpec& spec) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
  DatasetManifest manifest;
  char name[64];
  for (std::size_t i = 0; i < spec.speech_files; ++i) {
    Rng rng(seed, 0x5be0000 + i);
    const double duration = rng.Uniform(spec.speech_min_s, spec.speech_max_s);
    std::snprintf(name, sizeof(name), "speech_%04zu.wav", i);
    WriteWav((fs::path(dir) / name).string(), SynthesizeSpeech(rng, duration));
    manifest.speech_paths.push_back(name);
  }
  for (std::size_t i = 0; i < spec.noise_files; ++i) {
    Rng rng(seed, 0x0015e000 + i);
    const auto kind = static_cast<NoiseKind>(i % kNoiseKindCount);
    std::snprintf(name, sizeof(name), "noise_%04zu.wav", i);
    WriteWav((fs::path(dir) / name).string(), SynthesizeNoise(rng, kind, spec.noise_s));
    manifest.noise_paths.push_back(name);
  }
  const std::string path = (fs::path(dir) / "manifest.txt").string();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << manifest.ToText();
  if (!f) throw DataError("write failed: " + path);
  return path;
}

}  // namespace ctxmask::data
