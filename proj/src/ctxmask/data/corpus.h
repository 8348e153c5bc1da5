// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_DATA_CORPUS_H_
#define CTXMASK_DATA_CORPUS_H_

#include <cstdint>
#include <string>

#include "ctxmask/dsp.h"
#include "ctxmask/random.h"

namespace ctxmask::data {

// Synthetic stand-ins for a speech corpus and an environmental noise corpus,
// so the whole pipeline can run without external downloads.

enum class NoiseKind { kWhite, kPink, kBrown, kHum, kBabble, kModulated, kBand, kBeeps };
inline constexpr int kNoiseKindCount = 8;
std::string ToString(NoiseKind kind);

// Harmonic source with a moving F0 and three-formant envelope, shaped into
// syllables separated by pauses, with occasional unvoiced onsets.
Waveform SynthesizeSpeech(Rng& rng, double duration_s);

Waveform SynthesizeNoise(Rng& rng, NoiseKind kind, double duration_s);

struct CorpusSpec {
  std::size_t speech_files = 48;
  std::size_t noise_files = 24;
  double speech_min_s = 2.0;
  double speech_max_s = 5.0;
  double noise_s = 10.0;
};

// Writes speech_NNNN.wav, noise_NNNN.wav (kinds cycle through NoiseKind) and
// manifest.txt into dir. Returns the manifest path.
std::string WriteCorpus(const std::string& dir, std::uint64_t seed,
                        const CorpusSpec& spec = {});

}  // namespace ctxmask::data

#endif  // CTXMASK_DATA_CORPUS_H_
