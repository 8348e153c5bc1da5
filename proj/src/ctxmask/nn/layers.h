// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_NN_LAYERS_H_
#define CTXMASK_NN_LAYERS_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/nn/tensor.h"
#include "ctxmask/random.h"

namespace ctxmask::nn {

enum class LayerKind {
  kConvFreq,           // 2-D convolution with a 1 x C_k kernel over frequency
  kConvTransposeFreq,  // its transpose, used by the decoder
  kRelu,
  kSigmoid,
  kLstm,               // unidirectional, over the frame axis
  kFullyConnected,     // per-frame dense layer
};

std::string ToString(LayerKind kind);
LayerKind ParseLayerKind(const std::string& name);

// Layer description. feature_maps / kernel / stride / padding apply to the
// convolution kinds, units to lstm and fully-connected. output_padding
// resolves the size ambiguity of strided transposed convolutions.
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  std::size_t feature_maps = 0;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t output_padding = 0;
  std::size_t units = 0;

  static LayerSpec Conv(std::size_t maps, std::size_t kernel, std::size_t stride);
  static LayerSpec ConvTranspose(std::size_t maps, std::size_t kernel,
                                 std::size_t stride,
                                 std::size_t output_padding = 0);
  static LayerSpec Relu() { return {LayerKind::kRelu}; }
  static LayerSpec Sigmoid() { return {LayerKind::kSigmoid}; }
  static LayerSpec Lstm(std::size_t units);
  static LayerSpec FullyConnected(std::size_t units);

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Per-frame feature shape: channels x bins. Frame count is free.
struct FeatureShape {
  std::size_t channels = 0;
  std::size_t bins = 0;
  std::size_t size() const { return channels * bins; }
  friend bool operator==(const FeatureShape&, const FeatureShape&) = default;
};

// Output shape of `spec` applied to `in`; throws UsageError when the layer
// cannot accept that input.
FeatureShape PropagateShape(const LayerSpec& spec, FeatureShape in);
std::size_t ParamCount(const LayerSpec& spec, FeatureShape in);

// Whatever a forward pass keeps for the backward pass.
struct LayerCache {
  std::size_t sequence = 0;
  Tensor input;
  Tensor output;
  std::vector<double> aux;
};

// A layer bound to a fixed per-frame input shape. Parameters live outside
// the layer (a slice of the model's flat parameter vector), so a const
// layer can run concurrent forward passes with separate caches.
class Layer {
 public:
  Layer(LayerSpec spec, FeatureShape in);
  virtual ~Layer() = default;

  const LayerSpec& spec() const { return spec_; }
  FeatureShape input_shape() const { return in_; }
  FeatureShape output_shape() const { return out_; }
  std::size_t param_count() const { return ParamCount(spec_, in_); }

  // Glorot-uniform weights, zero biases.
  virtual void Initialize(std::span<double> params, Rng& rng) const;
  // cache may be null for inference. The frames axis holds consecutive
  // independent sequences of `sequence` frames each; 0 means a single one.
  virtual Tensor Forward(std::span<const double> params, const Tensor& in,
                         LayerCache* cache,
                         std::size_t sequence = 0) const = 0;
  // Accumulates into grad_params and returns d loss / d input.
  virtual Tensor Backward(std::span<const double> params,
                          const LayerCache& cache, const Tensor& grad_out,
                          std::span<double> grad_params) const = 0;

 protected:
  void CheckInput(const Tensor& in) const;

  LayerSpec spec_;
  FeatureShape in_;
  FeatureShape out_;
};

std::unique_ptr<Layer> MakeLayer(const LayerSpec& spec, FeatureShape in);

}  // namespace ctxmask::nn

#endif  // CTXMASK_NN_LAYERS_H_
