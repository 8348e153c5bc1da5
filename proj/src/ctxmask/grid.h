// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_GRID_H_
#define CTXMASK_GRID_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/errors.h"

namespace ctxmask {

// Dense time-by-frequency grid, row-major with one row per STFT frame.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t frames, std::size_t bins, T fill = T{})
      : frames_(frames), bins_(bins), values_(frames * bins, fill) {}
  Grid(std::size_t frames, std::size_t bins, std::vector<T> values)
      : frames_(frames), bins_(bins), values_(std::move(values)) {
    if (values_.size() != frames_ * bins_)
      throw UsageError("grid: value count does not match dimensions");
  }

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& operator()(std::size_t t, std::size_t f) { return values_[t * bins_ + f]; }
  const T& operator()(std::size_t t, std::size_t f) const {
    return values_[t * bins_ + f];
  }

  std::span<T> row(std::size_t t) {
    return {values_.data() + t * bins_, bins_};
  }
  std::span<const T> row(std::size_t t) const {
    return {values_.data() + t * bins_, bins_};
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  bool SameShape(std::size_t frames, std::size_t bins) const {
    return frames_ == frames && bins_ == bins;
  }
  template <typename U>
  bool SameShape(const Grid<U>& other) const {
    return SameShape(other.frames(), other.bins());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<T> values_;
};

using RealGrid = Grid<double>;
using ComplexSpectrogram = Grid<std::complex<double>>;
using MagnitudeSpectrogram = Grid<double>;

template <typename A, typename B>
void RequireSameShape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.SameShape(b))
    throw UsageError(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a.frames()) + "x" +
                     std::to_string(a.bins()) + " vs " +
                     std::to_string(b.frames()) + "x" +
                     std::to_string(b.bins()) + ")");
}

}  // namespace ctxmask

#endif  // CTXMASK_GRID_H_
