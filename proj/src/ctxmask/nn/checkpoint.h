// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_NN_CHECKPOINT_H_
#define CTXMASK_NN_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ctxmask::nn {

// Checkpoint layout, all integers little-endian:
//   8 bytes  magic "CTXMCKPT"
//   u32      format version (1)
//   u64      FNV-1a 64 digest of the configuration text
//   u32      configuration text length, then the text (normalized run config)
//   u64      parameter count, then that many float64 values, little-endian,
//            in layer declaration order
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string config_text;
  std::vector<double> params;
};

std::uint64_t Fnv1a64(std::string_view bytes);

std::vector<std::uint8_t> EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint DecodeCheckpoint(const std::vector<std::uint8_t>& bytes,
                            const std::string& origin = "<memory>");
void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace ctxmask::nn

#endif  // CTXMASK_NN_CHECKPOINT_H_
