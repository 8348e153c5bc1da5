// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_NN_MODEL_H_
#define CTXMASK_NN_MODEL_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/context_window.h"
#include "ctxmask/nn/layers.h"
#include "ctxmask/nn/tensor.h"

namespace ctxmask::nn {

enum class Architecture { kCdae, kCrn };

std::string ToString(Architecture arch);
Architecture ParseArchitecture(const std::string& name);

// LSTM + fully-connected stage between encoder and decoder (CRN only). The
// FC output is reshaped back to the encoder's output shape.
struct Bottleneck {
  std::size_t lstm_units = 0;
  std::size_t fc_units = 0;
  friend bool operator==(const Bottleneck&, const Bottleneck&) = default;
};

struct ModelConfig {
  Architecture architecture = Architecture::kCdae;
  std::vector<LayerSpec> encoder;
  std::optional<Bottleneck> bottleneck;
  std::vector<LayerSpec> decoder;
  ContextWindowConfig context;
  std::size_t freq_bins = 65;

  // Encoder, bottleneck (lstm, fully-connected, relu) and decoder in order.
  std::vector<LayerSpec> Layers() const;
  // Shape of every layer's input; element i feeds Layers()[i].
  std::vector<FeatureShape> LayerInputShapes() const;
  // Throws UsageError unless the decoder restores (w_out, freq_bins), the
  // head is a sigmoid and the bottleneck matches the architecture.
  void Validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Knobs of the reference encoder/decoder family: one conv + ReLU per entry
// of `channels`, mirrored by transposed convolutions, sigmoid head.
struct ReferenceModelOptions {
  std::vector<std::size_t> channels = {8, 64, 96};
  std::size_t kernel = 3;
  std::size_t stride = 2;
  std::size_t lstm_units = 64;
};

ModelConfig MakeReferenceConfig(Architecture arch, ContextWindowConfig context,
                                std::size_t freq_bins = 65,
                                const ReferenceModelOptions& options = {});

// Exact number of trainable scalars, layer by layer.
std::size_t CountParams(const ModelConfig& cfg);

// Relative parameter increase of `cfg` over `baseline`, in percent.
double ParamIncreasePercent(const ModelConfig& cfg, const ModelConfig& baseline);

// Trainable mask estimator built from a ModelConfig. Parameters are one flat
// vector in layer declaration order (weights before biases).
class Model final : public MaskEstimator {
 public:
  struct Tape {
    std::vector<LayerCache> caches;
  };

  explicit Model(ModelConfig cfg);
  Model(const Model& other);
  Model& operator=(const Model& other);
  Model(Model&&) noexcept = default;
  Model& operator=(Model&&) noexcept = default;

  // Seeded Glorot-uniform weights, zero biases.
  void Initialize(std::uint64_t seed);
  // Zeroes the last layer that owns parameters.
  void ZeroFinalLayer();

  const ModelConfig& config() const { return config_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_[i]; }
  // Offset of layer i's parameters in params().
  std::size_t param_offset(std::size_t i) const { return offsets_[i]; }

  // input (w_in, F, T) -> output (w_out, F, T). Convolutions treat every
  // frame independently; only the LSTM mixes frames, and only forwards.
  // A nonzero `sequence` splits T into independent runs of that length.
  Tensor Forward(const Tensor& input, Tape* tape = nullptr,
                 std::size_t sequence = 0) const;
  // Accumulates d loss / d params into grads; returns d loss / d input.
  Tensor Backward(const Tape& tape, const Tensor& grad_output,
                  std::span<double> grads) const;

  std::size_t input_context() const override { return config_.context.w_in(); }
  std::size_t output_context() const override { return config_.context.w_out(); }
  std::size_t bins() const override { return config_.freq_bins; }
  Tensor EstimateWindows(const Tensor& windows) const override {
    return Forward(windows);
  }

 private:
  void Build();

  ModelConfig config_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

// Emits the same mask value for every bin. Used for identity / silence
// checks of the inference path.
class ConstantEstimator final : public MaskEstimator {
 public:
  ConstantEstimator(double value, ContextWindowConfig context,
                    std::size_t freq_bins);
  std::size_t input_context() const override { return context_.w_in(); }
  std::size_t output_context() const override { return context_.w_out(); }
  std::size_t bins() const override { return bins_; }
  Tensor EstimateWindows(const Tensor& windows) const override;

 private:
  double value_;
  ContextWindowConfig context_;
  std::size_t bins_;
};

}  // namespace ctxmask::nn

#endif  // CTXMASK_NN_MODEL_H_
