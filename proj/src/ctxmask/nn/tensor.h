// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_NN_TENSOR_H_
#define CTXMASK_NN_TENSOR_H_

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/errors.h"

namespace ctxmask::nn {

// Dense row-major tensor of doubles. Network activations use the rank-3
// layout (channels, bins, frames) so loops over time are contiguous.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0)
      : shape_(std::move(shape)), data_(Product(shape_), fill) {}
  Tensor(std::vector<std::size_t> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != Product(shape_))
      throw UsageError("tensor: data length does not match shape");
  }
  static Tensor Zeros(std::size_t channels, std::size_t bins,
                      std::size_t frames) {
    return Tensor({channels, bins, frames});
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double* raw() { return data_.data(); }
  const double* raw() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Rank-3 accessors.
  std::size_t channels() const { return shape_.at(0); }
  std::size_t bins() const { return shape_.at(1); }
  std::size_t frames() const { return shape_.at(2); }
  double& at(std::size_t c, std::size_t f, std::size_t t) {
    return data_[(c * shape_[1] + f) * shape_[2] + t];
  }
  double at(std::size_t c, std::size_t f, std::size_t t) const {
    return data_[(c * shape_[1] + f) * shape_[2] + t];
  }
  // Contiguous frame row for (channel, bin).
  double* row(std::size_t c, std::size_t f) {
    return data_.data() + (c * shape_[1] + f) * shape_[2];
  }
  const double* row(std::size_t c, std::size_t f) const {
    return data_.data() + (c * shape_[1] + f) * shape_[2];
  }

  // Same memory, new shape of equal element count.
  Tensor Reshaped(std::vector<std::size_t> shape) const& {
    return Tensor(std::move(shape), data_);
  }
  Tensor Reshaped(std::vector<std::size_t> shape) && {
    return Tensor(std::move(shape), std::move(data_));
  }

  std::string ShapeString() const {
    std::string s = "(";
    for (std::size_t i = 0; i < shape_.size(); ++i)
      s += (i ? ", " : "") + std::to_string(shape_[i]);
    return s + ")";
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  static std::size_t Product(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
  }

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

}  // namespace ctxmask::nn

#endif  // CTXMASK_NN_TENSOR_H_
