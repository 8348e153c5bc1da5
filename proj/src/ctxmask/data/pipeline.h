// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_DATA_PIPELINE_H_
#define CTXMASK_DATA_PIPELINE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctxmask/dsp.h"
#include "ctxmask/grid.h"

namespace ctxmask::data {

inline constexpr double kClipSeconds = 10.0;
inline constexpr std::size_t kClipSamples = 160000;

// Ranges the per-example augmentation parameters are drawn from.
struct MixRanges {
  double snr_min_db = -5.0;
  double snr_max_db = 20.0;
  double gain_range_db = 3.0;  // segment gains uniform in [-g, g]
  double fade_min_s = 0.20;
  double fade_max_s = 0.30;

  void Validate() const;
};

enum class Split { kTrain, kTest };
std::string ToString(Split split);
Split ParseSplit(const std::string& name);

// Drawn augmentation for one 10 s example.
struct MixSpec {
  std::uint64_t seed = 0;
  std::size_t index = 0;
  double snr_db = 0.0;
  std::vector<std::size_t> speech_files;   // manifest indices, in order
  std::vector<double> segment_gains_db;    // one per speech segment
  double fade_s = 0.25;                    // speech segment fades
  std::size_t noise_file = 0;
  std::size_t noise_offset = 0;            // samples skipped in the noise file
  double noise_fade_s = 0.25;
  double clip_s = kClipSeconds;
};

// Speech and noise file lists. Text format: "[speech]" and "[noise]" section
// headers, one path per line; blank lines and '#' comments ignored; relative
// paths resolve against the manifest's directory.
struct DatasetManifest {
  std::vector<std::string> speech_paths;
  std::vector<std::string> noise_paths;
  std::uint64_t seed = 0;
  Split split = Split::kTrain;

  static DatasetManifest Parse(const std::string& text,
                               const std::string& base_dir = "");
  static DatasetManifest Load(const std::string& path);
  std::string ToText() const;
  void Validate() const;
};

// 0.001 * exp(6.908 * t) for t in [0, 1], clamped to <= 1: a 60 dB ramp.
double FadeGain(double t_norm);

// In-place fade-in over the first `fade_samples` and mirrored fade-out over
// the last ones; clamped to half the signal length.
void ApplyFades(std::vector<double>& samples, std::size_t fade_samples);

// Scales to max |x| = 1; all-zero input stays zero.
void PeakNormalize(std::vector<double>& samples);

// Segment i gets gain segment_gains_db[i] and fades of fade_s; segments are
// concatenated, truncated (or zero-padded) to clip_s, then peak-normalized.
Waveform BuildCleanTrack(const std::vector<Waveform>& segments,
                         const MixSpec& spec);

struct Mixture {
  Waveform noisy;
  Waveform scaled_noise;
  double scale = 1.0;
};

// noisy = speech + scale * noise with scale chosen so that the full-clip
// energy ratio equals snr_db.
Mixture MixAtSnr(const Waveform& speech, const Waveform& noise, double snr_db);

// Decoded audio shared across examples.
class AudioCache {
 public:
  const Waveform& Get(const std::string& path);

 private:
  std::map<std::string, Waveform> files_;
};

// Draws the augmentation of example `index`. Pure function of
// (manifest, index, ranges) and the speech file durations.
MixSpec DrawMixSpec(const DatasetManifest& manifest, std::size_t index,
                    const MixRanges& ranges, AudioCache& cache);

struct ExampleTriplet {
  MixSpec spec;
  Waveform clean;
  Waveform noise;  // already scaled to the drawn SNR
  Waveform noisy;
  double noise_scale = 1.0;  // applied to the peak-normalized noise track
  ComplexSpectrogram clean_spec;
  ComplexSpectrogram noise_spec;
  ComplexSpectrogram noisy_spec;
};

ExampleTriplet SynthesizeExample(const DatasetManifest& manifest,
                                 std::size_t index, const MixRanges& ranges,
                                 const StftConfig& stft, AudioCache& cache);

// One row of a dataset's metadata.tsv sidecar.
struct DatasetEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  std::vector<double> segment_gains_db;
  double fade_s = 0.0;
  double noise_fade_s = 0.0;
  double noise_scale = 1.0;
  double output_gain = 1.0;
  std::string clean_file;
  std::string noise_file;
  std::string noisy_file;
};

inline constexpr const char* kMetadataFile = "metadata.tsv";

// Writes example_NNNNNN_{clean,noise,noisy}.wav for indices [0, count) and
// the metadata sidecar. On disk all three are scaled by a common gain that
// leaves 1% headroom, and noisy PCM is the integer sum of clean and noise
// PCM so additivity survives quantization.
void WriteDataset(const DatasetManifest& manifest, const std::string& out_dir,
                  std::size_t count, const MixRanges& ranges,
                  const StftConfig& stft);

std::vector<DatasetEntry> ReadDatasetIndex(const std::string& dir);

struct LoadedExample {
  DatasetEntry entry;
  Waveform clean;
  Waveform noise;
  Waveform noisy;
};

LoadedExample LoadExample(const std::string& dir, const DatasetEntry& entry);

}  // namespace ctxmask::data

#endif  // CTXMASK_DATA_PIPELINE_H_
