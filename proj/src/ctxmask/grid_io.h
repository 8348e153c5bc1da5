// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_GRID_IO_H_
#define CTXMASK_GRID_IO_H_

#include <string>

#include "ctxmask/grid.h"

namespace ctxmask {

// Grid file layout:
//   bytes 0..3   magic "CMGR" (real grid) or "CMGC" (complex grid)
//   bytes 4..7   frames, uint32 little-endian
//   bytes 8..11  bins (columns), uint32 little-endian; complex grids store
//                2 * bins here, interleaving real and imaginary parts
//   then frames * columns IEEE-754 float64 values, little-endian, row-major
void WriteGrid(const std::string& path, const RealGrid& grid);
void WriteGrid(const std::string& path, const ComplexSpectrogram& grid);
RealGrid ReadRealGrid(const std::string& path);
ComplexSpectrogram ReadComplexGrid(const std::string& path);

}  // namespace ctxmask

#endif  // CTXMASK_GRID_IO_H_
