// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ctxmask {
namespace {

constexpr double kPcmScale = 32767.0;

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::vector<std::uint8_t> EncodePcm16(const std::vector<std::int16_t>& pcm,
                                      int sample_rate_hz) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(pcm.size() * sizeof(std::int16_t));
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, 1);  // mono
  PutU32(out, static_cast<std::uint32_t>(sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(sample_rate_hz) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (std::int16_t s : pcm) PutU16(out, static_cast<std::uint16_t>(s));
  return out;
}

void WriteBytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw DataError("write failed: " + path);
}

}  // namespace

std::vector<std::int16_t> QuantizePcm16(const std::vector<double>& samples) {
  std::vector<std::int16_t> pcm(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double v = std::round(samples[i] * kPcmScale);
    v = std::clamp(v, -32768.0, 32767.0);
    pcm[i] = static_cast<std::int16_t>(v);
  }
  return pcm;
}

std::vector<double> DequantizePcm16(const std::vector<std::int16_t>& pcm) {
  std::vector<double> out(pcm.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) out[i] = pcm[i] / kPcmScale;
  return out;
}

Waveform DecodeWav(const std::vector<std::uint8_t>& bytes,
                   const std::string& origin) {
  auto fail = [&](const std::string& why) {
    return DataError(origin + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw fail("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t chunk_size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) throw fail("truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw fail("fmt chunk too small");
      const std::uint8_t* fmt = bytes.data() + body;
      const std::uint16_t format = ReadU16(fmt);
      const std::uint16_t channels = ReadU16(fmt + 2);
      const std::uint32_t rate = ReadU32(fmt + 4);
      const std::uint16_t bits = ReadU16(fmt + 14);
      if (format != 1) throw fail("unsupported encoding (need integer PCM)");
      if (channels != 1)
        throw fail("expected mono audio, got " + std::to_string(channels) +
                   " channels");
      if (bits != 16)
        throw fail("expected 16-bit samples, got " + std::to_string(bits));
      if (rate != static_cast<std::uint32_t>(kSampleRateHz))
        throw fail("expected 16000 Hz, got " + std::to_string(rate) +
                   " Hz (resample externally)");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw fail("data chunk before fmt chunk");
      std::vector<std::int16_t> pcm(chunk_size / 2);
      for (std::size_t i = 0; i < pcm.size(); ++i)
        pcm[i] = static_cast<std::int16_t>(ReadU16(bytes.data() + body + 2 * i));
      return Waveform{DequantizePcm16(pcm), kSampleRateHz};
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  throw fail(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

Waveform ReadWav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return DecodeWav(bytes, path);
}

std::vector<std::uint8_t> EncodeWav(const Waveform& wave) {
  if (wave.sample_rate_hz != kSampleRateHz)
    throw UsageError("wav: only 16000 Hz output is supported");
  return EncodePcm16(QuantizePcm16(wave.samples), wave.sample_rate_hz);
}

void WriteWav(const std::string& path, const Waveform& wave) {
  WriteBytes(path, EncodeWav(wave));
}

void WriteWavPcm16(const std::string& path, const std::vector<std::int16_t>& pcm,
                   int sample_rate_hz) {
  WriteBytes(path, EncodePcm16(pcm, sample_rate_hz));
}

}  // namespace ctxmask
