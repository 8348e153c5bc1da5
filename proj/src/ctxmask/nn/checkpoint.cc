// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/nn/checkpoint.h"

#include <cstring>
#include <fstream>
#include <iterator>

#include "ctxmask/byte_order.h"
#include "ctxmask/errors.h"

namespace ctxmask::nn {
namespace {
constexpr char kMagic[8] = {'C', 'T', 'X', 'M', 'C', 'K', 'P', 'T'};
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> EncodeCheckpoint(const Checkpoint& ckpt) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  AppendLe<std::uint32_t>(out, kCheckpointVersion);
  AppendLe<std::uint64_t>(out, Fnv1a64(ckpt.config_text));
  AppendLe<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.config_text.size()));
  out.insert(out.end(), ckpt.config_text.begin(), ckpt.config_text.end());
  AppendLe<std::uint64_t>(out, ckpt.params.size());
  for (double p : ckpt.params) AppendLe<double>(out, p);
  return out;
}

Checkpoint DecodeCheckpoint(const std::vector<std::uint8_t>& bytes,
                            const std::string& origin) {
  auto fail = [&](const std::string& why) {
    return DataError(origin + ": " + why);
  };
  std::size_t pos = 0;
  auto need = [&](std::size_t n) {
    if (bytes.size() - pos < n) throw fail("truncated checkpoint");
  };
  need(8);
  if (std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw fail("not a ctxmask checkpoint");
  pos = 8;
  need(4 + 8 + 4);
  const auto version = LoadLe<std::uint32_t>(bytes.data() + pos);
  if (version != kCheckpointVersion)
    throw fail("unsupported checkpoint version " + std::to_string(version));
  const auto digest = LoadLe<std::uint64_t>(bytes.data() + pos + 4);
  const auto text_len = LoadLe<std::uint32_t>(bytes.data() + pos + 12);
  pos += 16;
  need(text_len);
  Checkpoint ckpt;
  ckpt.config_text.assign(reinterpret_cast<const char*>(bytes.data() + pos),
                          text_len);
  pos += text_len;
  if (Fnv1a64(ckpt.config_text) != digest)
    throw fail("configuration digest mismatch");
  need(8);
  const auto count = LoadLe<std::uint64_t>(bytes.data() + pos);
  pos += 8;
  if ((bytes.size() - pos) / 8 < count || bytes.size() - pos != count * 8)
    throw fail("parameter payload size does not match header");
  ckpt.params.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    ckpt.params[i] = LoadLe<double>(bytes.data() + pos + 8 * i);
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  const auto bytes = EncodeCheckpoint(ckpt);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw DataError("write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return DecodeCheckpoint(bytes, path);
}

}  // namespace ctxmask::nn
