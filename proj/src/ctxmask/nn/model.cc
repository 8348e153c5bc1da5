// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/nn/model.h"

#include <algorithm>
#include <cmath>

namespace ctxmask::nn {

std::string ToString(Architecture arch) {
  return arch == Architecture::kCdae ? "cdae" : "crn";
}

Architecture ParseArchitecture(const std::string& name) {
  if (name == "cdae") return Architecture::kCdae;
  if (name == "crn") return Architecture::kCrn;
  throw UsageError("unknown model architecture: " + name + " (cdae|crn)");
}

std::vector<LayerSpec> ModelConfig::Layers() const {
  std::vector<LayerSpec> layers = encoder;
  if (bottleneck) {
    layers.push_back(LayerSpec::Lstm(bottleneck->lstm_units));
    layers.push_back(LayerSpec::FullyConnected(bottleneck->fc_units));
    layers.push_back(LayerSpec::Relu());
  }
  layers.insert(layers.end(), decoder.begin(), decoder.end());
  return layers;
}

std::vector<FeatureShape> ModelConfig::LayerInputShapes() const {
  std::vector<FeatureShape> shapes;
  FeatureShape shape{context.w_in(), freq_bins};
  for (const auto& spec : encoder) {
    shapes.push_back(shape);
    shape = PropagateShape(spec, shape);
  }
  if (bottleneck) {
    const FeatureShape encoded = shape;
    const auto lstm = LayerSpec::Lstm(bottleneck->lstm_units);
    const auto fc = LayerSpec::FullyConnected(bottleneck->fc_units);
    shapes.push_back(shape);
    shape = PropagateShape(lstm, shape);
    shapes.push_back(shape);
    shape = PropagateShape(fc, shape);
    shapes.push_back(shape);  // relu
    if (shape.size() != encoded.size())
      throw UsageError("bottleneck: fc units (" + std::to_string(shape.size()) +
                       ") must equal encoder output size (" +
                       std::to_string(encoded.size()) + ")");
    shape = encoded;
  }
  for (const auto& spec : decoder) {
    shapes.push_back(shape);
    shape = PropagateShape(spec, shape);
  }
  shapes.push_back(shape);  // final output
  return shapes;
}

void ModelConfig::Validate() const {
  if (freq_bins < 1) throw UsageError("model: freq_bins must be >= 1");
  if (decoder.empty() || decoder.back().kind != LayerKind::kSigmoid)
    throw UsageError("model: final activation must be sigmoid");
  if (architecture == Architecture::kCrn && !bottleneck)
    throw UsageError("model: crn requires an lstm + fc bottleneck");
  if (architecture == Architecture::kCdae && bottleneck)
    throw UsageError("model: cdae has no recurrent bottleneck");
  for (const auto& spec : encoder)
    if (spec.kind == LayerKind::kLstm)
      throw UsageError("model: lstm layers belong in the bottleneck");
  const auto shapes = LayerInputShapes();
  const FeatureShape out = shapes.back();
  if (out.bins != freq_bins)
    throw UsageError("model: decoder yields " + std::to_string(out.bins) +
                     " bins, expected " + std::to_string(freq_bins));
  if (out.channels != context.w_out())
    throw UsageError("model: decoder yields " + std::to_string(out.channels) +
                     " output channels, expected w_out=" +
                     std::to_string(context.w_out()));
}

ModelConfig MakeReferenceConfig(Architecture arch, ContextWindowConfig context,
                                std::size_t freq_bins,
                                const ReferenceModelOptions& options) {
  if (options.channels.empty())
    throw UsageError("model: need at least one encoder layer");
  ModelConfig cfg;
  cfg.architecture = arch;
  cfg.context = context;
  cfg.freq_bins = freq_bins;

  std::vector<std::size_t> bins{freq_bins};
  FeatureShape shape{context.w_in(), freq_bins};
  for (std::size_t maps : options.channels) {
    cfg.encoder.push_back(LayerSpec::Conv(maps, options.kernel, options.stride));
    cfg.encoder.push_back(LayerSpec::Relu());
    shape = PropagateShape(cfg.encoder[cfg.encoder.size() - 2], shape);
    bins.push_back(shape.bins);
  }
  if (arch == Architecture::kCrn)
    cfg.bottleneck = Bottleneck{options.lstm_units, shape.size()};

  // Mirror the encoder; output_padding restores each encoder input size.
  for (std::size_t i = options.channels.size(); i-- > 0;) {
    const std::size_t maps = i == 0 ? context.w_out() : options.channels[i - 1];
    auto spec = LayerSpec::ConvTranspose(maps, options.kernel, options.stride);
    const FeatureShape raw = PropagateShape(spec, shape);
    if (bins[i] < raw.bins || bins[i] - raw.bins >= options.stride)
      throw UsageError("model: cannot mirror encoder frequency sizes");
    spec.output_padding = bins[i] - raw.bins;
    shape = PropagateShape(spec, shape);
    cfg.decoder.push_back(spec);
    cfg.decoder.push_back(i == 0 ? LayerSpec::Sigmoid() : LayerSpec::Relu());
  }
  cfg.Validate();
  return cfg;
}

std::size_t CountParams(const ModelConfig& cfg) {
  const auto layers = cfg.Layers();
  const auto shapes = cfg.LayerInputShapes();
  std::size_t total = 0;
  for (std::size_t i = 0; i < layers.size(); ++i)
    total += ParamCount(layers[i], shapes[i]);
  return total;
}

double ParamIncreasePercent(const ModelConfig& cfg,
                            const ModelConfig& baseline) {
  const double base = static_cast<double>(CountParams(baseline));
  return 100.0 * (static_cast<double>(CountParams(cfg)) - base) / base;
}

Model::Model(ModelConfig cfg) : config_(std::move(cfg)) { Build(); }

Model::Model(const Model& other) : config_(other.config_) {
  Build();
  params_ = other.params_;
}

Model& Model::operator=(const Model& other) {
  if (this != &other) {
    config_ = other.config_;
    Build();
    params_ = other.params_;
  }
  return *this;
}

void Model::Build() {
  config_.Validate();
  const auto specs = config_.Layers();
  const auto shapes = config_.LayerInputShapes();
  layers_.clear();
  offsets_.clear();
  std::size_t offset = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    layers_.push_back(MakeLayer(specs[i], shapes[i]));
    offsets_.push_back(offset);
    offset += layers_.back()->param_count();
  }
  params_.assign(offset, 0.0);
}

void Model::Initialize(std::uint64_t seed) {
  Rng rng(seed, 0x1417);
  for (std::size_t i = 0; i < layers_.size(); ++i)
    layers_[i]->Initialize(
        std::span(params_).subspan(offsets_[i], layers_[i]->param_count()),
        rng);
}

void Model::ZeroFinalLayer() {
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const std::size_t n = layers_[i]->param_count();
    if (n == 0) continue;
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]), n,
                0.0);
    return;
  }
}

namespace {

Tensor ShapedFor(Tensor t, FeatureShape shape) {
  if (t.channels() == shape.channels && t.bins() == shape.bins) return t;
  const std::size_t frames = t.frames();
  return std::move(t).Reshaped({shape.channels, shape.bins, frames});
}

}  // namespace

Tensor Model::Forward(const Tensor& input, Tape* tape,
                      std::size_t sequence) const {
  if (input.rank() != 3 || input.channels() != config_.context.w_in() ||
      input.bins() != config_.freq_bins)
    throw UsageError("model: expected input (" +
                     std::to_string(config_.context.w_in()) + ", " +
                     std::to_string(config_.freq_bins) + ", T), got " +
                     input.ShapeString());
  if (sequence > 0 && input.frames() % sequence != 0)
    throw UsageError("model: frames not a multiple of the sequence length");
  if (tape) tape->caches.assign(layers_.size(), LayerCache{});
  Tensor x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& layer = *layers_[i];
    x = ShapedFor(std::move(x), layer.input_shape());
    x = layer.Forward(
        std::span<const double>(params_).subspan(offsets_[i],
                                                 layer.param_count()),
        x, tape ? &tape->caches[i] : nullptr, sequence);
  }
  return x;
}

Tensor Model::Backward(const Tape& tape, const Tensor& grad_output,
                       std::span<double> grads) const {
  if (grads.size() != params_.size())
    throw UsageError("model: gradient buffer has wrong size");
  if (tape.caches.size() != layers_.size())
    throw UsageError("model: backward without a recorded forward pass");
  Tensor g = grad_output;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Layer& layer = *layers_[i];
    g = ShapedFor(std::move(g), layer.output_shape());
    g = layer.Backward(
        std::span<const double>(params_).subspan(offsets_[i],
                                                 layer.param_count()),
        tape.caches[i], g, grads.subspan(offsets_[i], layer.param_count()));
  }
  return g;
}

ConstantEstimator::ConstantEstimator(double value, ContextWindowConfig context,
                                     std::size_t freq_bins)
    : value_(value), context_(context), bins_(freq_bins) {
  if (!(value >= 0.0 && value <= 1.0))
    throw UsageError("constant mask value must lie in [0, 1]");
}

Tensor ConstantEstimator::EstimateWindows(const Tensor& windows) const {
  if (windows.rank() != 3 || windows.channels() != context_.w_in() ||
      windows.bins() != bins_)
    throw UsageError("constant estimator: unexpected input shape " +
                     windows.ShapeString());
  return Tensor({context_.w_out(), bins_, windows.frames()}, value_);
}

}  // namespace ctxmask::nn
