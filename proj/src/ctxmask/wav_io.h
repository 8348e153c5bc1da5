// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_WAV_IO_H_
#define CTXMASK_WAV_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ctxmask/dsp.h"

namespace ctxmask {

// Only RIFF/WAVE, mono, 16-bit signed little-endian PCM at 16 kHz is
// accepted. Anything else raises DataError naming the path.
Waveform ReadWav(const std::string& path);
Waveform DecodeWav(const std::vector<std::uint8_t>& bytes,
                   const std::string& origin = "<memory>");

// Samples are scaled by 32767, rounded and saturated to int16.
void WriteWav(const std::string& path, const Waveform& wave);
std::vector<std::uint8_t> EncodeWav(const Waveform& wave);

std::vector<std::int16_t> QuantizePcm16(const std::vector<double>& samples);
std::vector<double> DequantizePcm16(const std::vector<std::int16_t>& pcm);
void WriteWavPcm16(const std::string& path, const std::vector<std::int16_t>& pcm,
                   int sample_rate_hz = kSampleRateHz);

}  // namespace ctxmask

#endif  // CTXMASK_WAV_IO_H_
