// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/grid_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "ctxmask/byte_order.h"

namespace ctxmask {
namespace {

constexpr char kRealMagic[4] = {'C', 'M', 'G', 'R'};
constexpr char kComplexMagic[4] = {'C', 'M', 'G', 'C'};

void WriteRaw(const std::string& path, const char* magic, std::size_t frames,
              std::size_t columns, std::span<const double> values) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), magic, magic + 4);
  AppendLe<std::uint32_t>(out, static_cast<std::uint32_t>(frames));
  AppendLe<std::uint32_t>(out, static_cast<std::uint32_t>(columns));
  for (double v : values) AppendLe<double>(out, v);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("write failed: " + path);
}

std::vector<double> ReadRaw(const std::string& path, const char* magic,
                            std::size_t* frames, std::size_t* columns) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), magic, 4) != 0)
    throw DataError(path + ": not a grid file of the expected kind");
  *frames = LoadLe<std::uint32_t>(bytes.data() + 4);
  *columns = LoadLe<std::uint32_t>(bytes.data() + 8);
  const std::size_t count = *frames * *columns;
  if (bytes.size() != 12 + 8 * count)
    throw DataError(path + ": grid payload size does not match header");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = LoadLe<double>(bytes.data() + 12 + 8 * i);
  return values;
}

}  // namespace

void WriteGrid(const std::string& path, const RealGrid& grid) {
  WriteRaw(path, kRealMagic, grid.frames(), grid.bins(), grid.values());
}

void WriteGrid(const std::string& path, const ComplexSpectrogram& grid) {
  std::vector<double> flat;
  flat.reserve(grid.size() * 2);
  for (const auto& c : grid.values()) {
    flat.push_back(c.real());
    flat.push_back(c.imag());
  }
  WriteRaw(path, kComplexMagic, grid.frames(), grid.bins() * 2, flat);
}

RealGrid ReadRealGrid(const std::string& path) {
  std::size_t frames = 0, columns = 0;
  auto values = ReadRaw(path, kRealMagic, &frames, &columns);
  return RealGrid(frames, columns, std::move(values));
}

ComplexSpectrogram ReadComplexGrid(const std::string& path) {
  std::size_t frames = 0, columns = 0;
  auto values = ReadRaw(path, kComplexMagic, &frames, &columns);
  if (columns % 2 != 0) throw DataError(path + ": odd complex column count");
  ComplexSpectrogram grid(frames, columns / 2);
  auto dst = grid.values();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = {values[2 * i], values[2 * i + 1]};
  return grid;
}

}  // namespace ctxmask
