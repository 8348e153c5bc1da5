// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/data/pipeline.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ctxmask/metrics.h"
#include "ctxmask/random.h"
#include "ctxmask/wav_io.h"

namespace ctxmask::data {
namespace fs = std::filesystem;

namespace {

constexpr double kFadeFloor = 0.001;
constexpr double kFadeRate = 6.908;
constexpr double kDiskHeadroom = 0.99;
constexpr std::uint64_t kNoiseOrderStream = 0x6e015e0000000000ULL;

double DbToGain(double db) { return std::pow(10.0, db / 20.0); }

double Energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double Peak(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

std::size_t SecondsToSamples(double s, int rate) {
  return static_cast<std::size_t>(std::llround(s * rate));
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string ExampleName(std::size_t index, const char* kind) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "example_%06zu_%s.wav", index, kind);
  return buf;
}

}  // namespace

void MixRanges::Validate() const {
  if (!(snr_min_db <= snr_max_db)) throw UsageError("data: snr_min > snr_max");
  if (!(gain_range_db >= 0.0)) throw UsageError("data: gain range must be >= 0");
  if (!(fade_min_s >= 0.0 && fade_min_s <= fade_max_s))
    throw UsageError("data: need 0 <= fade_min <= fade_max");
}

std::string ToString(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw UsageError("unknown split: " + name + " (train|test)");
}

DatasetManifest DatasetManifest::Parse(const std::string& text,
                                       const std::string& base_dir) {
  DatasetManifest m;
  std::vector<std::string>* section = nullptr;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == "[speech]") {
      section = &m.speech_paths;
    } else if (line == "[noise]") {
      section = &m.noise_paths;
    } else if (line.front() == '[') {
      throw DataError("manifest line " + std::to_string(lineno) +
                      ": unknown section " + line);
    } else {
      if (!section)
        throw DataError("manifest line " + std::to_string(lineno) +
                        ": path outside a [speech]/[noise] section");
      fs::path p(line);
      if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
      section->push_back(p.lexically_normal().string());
    }
  }
  return m;
}

DatasetManifest DatasetManifest::Load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open manifest: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return Parse(ss.str(), fs::path(path).parent_path().string());
}

std::string DatasetManifest::ToText() const {
  std::string out = "[speech]\n";
  for (const auto& p : speech_paths) out += p + "\n";
  out += "[noise]\n";
  for (const auto& p : noise_paths) out += p + "\n";
  return out;
}

void DatasetManifest::Validate() const {
  if (speech_paths.empty()) throw DataError("manifest has no speech files");
  if (noise_paths.empty()) throw DataError("manifest has no noise files");
}

double FadeGain(double t_norm) {
  if (!(t_norm >= 0.0 && t_norm <= 1.0))
    throw UsageError("fade: normalized time must lie in [0, 1]");
  return std::min(1.0, kFadeFloor * std::exp(kFadeRate * t_norm));
}

void ApplyFades(std::vector<double>& samples, std::size_t fade_samples) {
  const std::size_t n = std::min(fade_samples, samples.size() / 2);
  if (n == 0) return;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = FadeGain(static_cast<double>(i) / static_cast<double>(n));
    samples[i] *= g;
    samples[samples.size() - 1 - i] *= g;
  }
}

void PeakNormalize(std::vector<double>& samples) {
  const double peak = Peak(samples);
  if (peak <= 0.0) return;
  for (double& v : samples) v /= peak;
}

Waveform BuildCleanTrack(const std::vector<Waveform>& segments,
                         const MixSpec& spec) {
  if (segments.empty()) throw UsageError("clean track: no speech segments");
  if (segments.size() != spec.segment_gains_db.size())
    throw UsageError("clean track: need one gain per segment");
  const int rate = segments.front().sample_rate_hz;
  const std::size_t clip = SecondsToSamples(spec.clip_s, rate);
  const std::size_t fade = SecondsToSamples(spec.fade_s, rate);
  Waveform track{{}, rate};
  track.samples.reserve(clip);
  for (std::size_t i = 0; i < segments.size() && track.size() < clip; ++i) {
    std::vector<double> seg = segments[i].samples;
    const double gain = DbToGain(spec.segment_gains_db[i]);
    for (double& v : seg) v *= gain;
    ApplyFades(seg, fade);
    const std::size_t take = std::min(seg.size(), clip - track.size());
    track.samples.insert(track.samples.end(), seg.begin(),
                         seg.begin() + static_cast<std::ptrdiff_t>(take));
  }
  track.samples.resize(clip, 0.0);
  PeakNormalize(track.samples);
  return track;
}

Mixture MixAtSnr(const Waveform& speech, const Waveform& noise, double snr_db) {
  if (speech.size() != noise.size())
    throw UsageError("mix: speech and noise differ in length");
  const double es = Energy(speech.samples);
  const double en = Energy(noise.samples);
  if (en <= 0.0) throw DataError("mix: noise has zero energy");
  if (es <= 0.0) throw DataError("mix: speech has zero energy");
  Mixture m;
  m.scale = std::sqrt(es / (en * std::pow(10.0, snr_db / 10.0)));
  m.scaled_noise = noise;
  for (double& v : m.scaled_noise.samples) v *= m.scale;
  m.noisy = speech;
  for (std::size_t i = 0; i < m.noisy.size(); ++i)
    m.noisy.samples[i] += m.scaled_noise.samples[i];
  return m;
}

const Waveform& AudioCache::Get(const std::string& path) {
  auto it = files_.find(path);
  if (it != files_.end()) return it->second;
  return files_.emplace(path, ReadWav(path)).first->second;
}

MixSpec DrawMixSpec(const DatasetManifest& manifest, std::size_t index,
                    const MixRanges& ranges, AudioCache& cache) {
  manifest.Validate();
  ranges.Validate();
  MixSpec spec;
  spec.seed = manifest.seed;
  spec.index = index;
  Rng rng(manifest.seed, index);

  if (manifest.split == Split::kTrain) {
    spec.snr_db = rng.Uniform(ranges.snr_min_db, ranges.snr_max_db);
  } else {
    std::vector<double> buckets;
    for (double b : kSnrBuckets)
      if (b >= ranges.snr_min_db && b <= ranges.snr_max_db) buckets.push_back(b);
    if (buckets.empty())
      throw UsageError("data: no evaluation SNR bucket inside the SNR range");
    spec.snr_db = buckets[rng.Below(buckets.size())];
  }
  spec.fade_s = rng.Uniform(ranges.fade_min_s, ranges.fade_max_s);
  spec.noise_fade_s = rng.Uniform(ranges.fade_min_s, ranges.fade_max_s);

  // Noise files are visited in a seeded permutation, so no file repeats
  // until every file has been used once.
  const std::size_t n_noise = manifest.noise_paths.size();
  std::vector<std::size_t> order(n_noise);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng(manifest.seed, kNoiseOrderStream + index / n_noise).Shuffle(order);
  spec.noise_file = order[index % n_noise];
  const Waveform& noise = cache.Get(manifest.noise_paths[spec.noise_file]);
  if (noise.size() == 0)
    throw DataError("empty noise file: " + manifest.noise_paths[spec.noise_file]);
  const std::size_t clip = SecondsToSamples(spec.clip_s, noise.sample_rate_hz);
  spec.noise_offset =
      noise.size() > clip ? static_cast<std::size_t>(rng.Below(noise.size() - clip + 1)) : 0;

  std::size_t total = 0;
  while (total < clip) {
    const std::size_t file =
        static_cast<std::size_t>(rng.Below(manifest.speech_paths.size()));
    const Waveform& seg = cache.Get(manifest.speech_paths[file]);
    if (seg.size() == 0)
      throw DataError("empty speech file: " + manifest.speech_paths[file]);
    spec.speech_files.push_back(file);
    spec.segment_gains_db.push_back(
        rng.Uniform(-ranges.gain_range_db, ranges.gain_range_db));
    total += seg.size();
  }
  return spec;
}

ExampleTriplet SynthesizeExample(const DatasetManifest& manifest,
                                 std::size_t index, const MixRanges& ranges,
                                 const StftConfig& stft, AudioCache& cache) {
  ExampleTriplet ex;
  ex.spec = DrawMixSpec(manifest, index, ranges, cache);

  std::vector<Waveform> segments;
  for (std::size_t f : ex.spec.speech_files)
    segments.push_back(cache.Get(manifest.speech_paths[f]));
  ex.clean = BuildCleanTrack(segments, ex.spec);

  const Waveform& source = cache.Get(manifest.noise_paths[ex.spec.noise_file]);
  Waveform noise{std::vector<double>(ex.clean.size()), source.sample_rate_hz};
  for (std::size_t i = 0; i < noise.size(); ++i)
    noise.samples[i] = source.samples[(ex.spec.noise_offset + i) % source.size()];
  ApplyFades(noise.samples,
             SecondsToSamples(ex.spec.noise_fade_s, noise.sample_rate_hz));
  PeakNormalize(noise.samples);

  Mixture mix = MixAtSnr(ex.clean, noise, ex.spec.snr_db);
  ex.noise_scale = mix.scale;
  ex.noise = std::move(mix.scaled_noise);
  ex.noisy = std::move(mix.noisy);
  ex.clean_spec = Stft(ex.clean, stft);
  ex.noise_spec = Stft(ex.noise, stft);
  ex.noisy_spec = Stft(ex.noisy, stft);
  return ex;
}

namespace {

std::string JoinGains(const std::vector<double>& gains) {
  std::string out;
  for (std::size_t i = 0; i < gains.size(); ++i)
    out += (i ? "," : "") + FormatDouble(gains[i]);
  return out;
}

std::vector<std::string> SplitOn(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

constexpr const char* kMetadataHeader =
    "index\tseed\tsnr_db\tsegment_gains_db\tfade_s\tnoise_fade_s\tnoise_scale\t"
    "output_gain\tclean\tnoise\tnoisy";

}  // namespace

void WriteDataset(const DatasetManifest& manifest, const std::string& out_dir,
                  std::size_t count, const MixRanges& ranges,
                  const StftConfig& stft) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create directory " + out_dir + ": " + ec.message());
  if (count > 0) manifest.Validate();

  std::ostringstream meta;
  meta << kMetadataHeader << '\n';
  AudioCache cache;
  for (std::size_t i = 0; i < count; ++i) {
    const ExampleTriplet ex = SynthesizeExample(manifest, i, ranges, stft, cache);
    const double peak = std::max(
        {Peak(ex.clean.samples), Peak(ex.noise.samples), Peak(ex.noisy.samples)});
    const double gain = kDiskHeadroom / peak;
    std::vector<double> s(ex.clean.samples), n(ex.noise.samples);
    for (double& v : s) v *= gain;
    for (double& v : n) v *= gain;
    const auto s_pcm = QuantizePcm16(s);
    const auto n_pcm = QuantizePcm16(n);
    std::vector<std::int16_t> y_pcm(s_pcm.size());
    for (std::size_t j = 0; j < y_pcm.size(); ++j) {
      const int sum = int{s_pcm[j]} + int{n_pcm[j]};
      y_pcm[j] = static_cast<std::int16_t>(std::clamp(sum, -32768, 32767));
    }

    const std::string clean = ExampleName(i, "clean");
    const std::string noise = ExampleName(i, "noise");
    const std::string noisy = ExampleName(i, "noisy");
    WriteWavPcm16((fs::path(out_dir) / clean).string(), s_pcm);
    WriteWavPcm16((fs::path(out_dir) / noise).string(), n_pcm);
    WriteWavPcm16((fs::path(out_dir) / noisy).string(), y_pcm);

    meta << i << '\t' << manifest.seed << '\t' << FormatDouble(ex.spec.snr_db)
         << '\t' << JoinGains(ex.spec.segment_gains_db) << '\t'
         << FormatDouble(ex.spec.fade_s) << '\t'
         << FormatDouble(ex.spec.noise_fade_s) << '\t'
         << FormatDouble(ex.noise_scale)
         << '\t' << FormatDouble(gain) << '\t' << clean << '\t' << noise
         << '\t' << noisy << '\n';
  }
  const std::string meta_path = (fs::path(out_dir) / kMetadataFile).string();
  std::ofstream f(meta_path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + meta_path);
  f << meta.str();
  if (!f) throw DataError("write failed: " + meta_path);
}

std::vector<DatasetEntry> ReadDatasetIndex(const std::string& dir) {
  const std::string path = (fs::path(dir) / kMetadataFile).string();
  std::ifstream f(path);
  if (!f) throw DataError("cannot open dataset index: " + path);
  std::string line;
  if (!std::getline(f, line) || line != kMetadataHeader)
    throw DataError(path + ": unexpected header");
  std::vector<DatasetEntry> entries;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = SplitOn(line, '\t');
    if (cols.size() != 11)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 11 columns");
    try {
      DatasetEntry e;
      e.index = std::stoul(cols[0]);
      e.seed = std::stoull(cols[1]);
      e.snr_db = std::stod(cols[2]);
      for (const auto& g : SplitOn(cols[3], ',')) e.segment_gains_db.push_back(std::stod(g));
      e.fade_s = std::stod(cols[4]);
      e.noise_fade_s = std::stod(cols[5]);
      e.noise_scale = std::stod(cols[6]);
      e.output_gain = std::stod(cols[7]);
      e.clean_file = cols[8];
      e.noise_file = cols[9];
      e.noisy_file = cols[10];
      entries.push_back(std::move(e));
    } catch (const std::logic_error&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return entries;
}

LoadedExample LoadExample(const std::string& dir, const DatasetEntry& entry) {
  const fs::path base(dir);
  LoadedExample ex{entry, ReadWav((base / entry.clean_file).string()),
                   ReadWav((base / entry.noise_file).string()),
                   ReadWav((base / entry.noisy_file).string())};
  if (ex.clean.size() != ex.noisy.size() || ex.noise.size() != ex.noisy.size())
    throw DataError("example " + std::to_string(entry.index) +
                    ": clean/noise/noisy lengths differ");
  return ex;
}

}  // namespace ctxmask::data
