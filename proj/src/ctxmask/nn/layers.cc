// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/nn/layers.h"

#include <algorithm>
#include <cmath>

namespace ctxmask::nn {
namespace {

inline void Axpy(double a, const double* __restrict x, double* __restrict y,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

inline double Dot(const double* __restrict x, const double* __restrict y,
                  std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

inline double Sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

inline double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void FillUniform(std::span<double> w, double limit, Rng& rng) {
  for (double& v : w) v = rng.Uniform(-limit, limit);
}

double GlorotLimit(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

// Input frequency index feeding output position `out` through kernel tap
// `tap`; false when it falls into the zero padding.
inline bool ConvSource(std::size_t out, std::size_t tap, const LayerSpec& s,
                       std::size_t in_bins, std::size_t* src) {
  const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(out * s.stride + tap) -
                             static_cast<std::ptrdiff_t>(s.padding);
  if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(in_bins)) return false;
  *src = static_cast<std::size_t>(pos);
  return true;
}

// A linear map between the rows of two (rows x frames) buffers, stored as
// sparse links out_row += w[weight] * in_row. Convolutions, fully connected
// layers and the LSTM input projection are all of this form. Rows are mixed
// several at a time so each output row is streamed once per group.
class RowMixer {
 public:
  struct Link {
    std::uint32_t in;
    std::uint32_t out;
    std::uint32_t weight;
  };

  RowMixer() = default;
  explicit RowMixer(std::vector<Link> links) : by_out_(std::move(links)) {
    std::stable_sort(by_out_.begin(), by_out_.end(),
                     [](const Link& a, const Link& b) { return a.out < b.out; });
    by_in_ = by_out_;
    std::stable_sort(by_in_.begin(), by_in_.end(),
                     [](const Link& a, const Link& b) { return a.in < b.in; });
  }

  // y += W x
  void Apply(const double* w, const double* x, double* y,
             std::size_t frames) const {
    Gather(by_out_, w, x, y, frames, &Link::out, &Link::in);
  }
  // gx += W^T gy
  void ApplyTransposed(const double* w, const double* gy, double* gx,
                       std::size_t frames) const {
    Gather(by_in_, w, gy, gx, frames, &Link::in, &Link::out);
  }
  // gw[weight] += <gy[out], x[in]>
  void WeightGradient(const double* gy, const double* x, double* gw,
                      std::size_t frames) const {
    const double* rows[kBlock];
    double acc[kBlock];
    for (std::size_t begin = 0; begin < by_out_.size();) {
      const std::uint32_t out = by_out_[begin].out;
      std::size_t end = begin;
      while (end < by_out_.size() && by_out_[end].out == out) ++end;
      const double* g = gy + out * frames;
      for (std::size_t l = begin; l < end; l += kBlock) {
        const std::size_t m = std::min(kBlock, end - l);
        for (std::size_t j = 0; j < m; ++j) rows[j] = x + by_out_[l + j].in * frames;
        MultiDot(g, rows, m, frames, acc);
        for (std::size_t j = 0; j < m; ++j) gw[by_out_[l + j].weight] += acc[j];
      }
      begin = end;
    }
  }

 private:
  static constexpr std::size_t kBlock = 8;

  static void Gather(const std::vector<Link>& links, const double* w,
                     const double* src, double* dst, std::size_t frames,
                     std::uint32_t Link::*to, std::uint32_t Link::*from) {
    const double* rows[kBlock];
    double coef[kBlock];
    for (std::size_t begin = 0; begin < links.size();) {
      const std::uint32_t target = links[begin].*to;
      std::size_t end = begin;
      while (end < links.size() && links[end].*to == target) ++end;
      double* y = dst + target * frames;
      for (std::size_t l = begin; l < end; l += kBlock) {
        const std::size_t m = std::min(kBlock, end - l);
        for (std::size_t j = 0; j < m; ++j) {
          rows[j] = src + links[l + j].*from * frames;
          coef[j] = w[links[l + j].weight];
        }
        MultiAxpy(coef, rows, m, y, frames);
      }
      begin = end;
    }
  }

  template <std::size_t M>
  static void AxpyBlock(const double* a, const double* const* x,
                        double* __restrict y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = y[i];
      for (std::size_t j = 0; j < M; ++j) acc += a[j] * x[j][i];
      y[i] = acc;
    }
  }

  static void MultiAxpy(const double* a, const double* const* x, std::size_t m,
                        double* __restrict y, std::size_t n) {
    switch (m) {
      case 8: return AxpyBlock<8>(a, x, y, n);
      case 7: return AxpyBlock<7>(a, x, y, n);
      case 6: return AxpyBlock<6>(a, x, y, n);
      case 5: return AxpyBlock<5>(a, x, y, n);
      case 4: return AxpyBlock<4>(a, x, y, n);
      case 3: return AxpyBlock<3>(a, x, y, n);
      case 2: return AxpyBlock<2>(a, x, y, n);
      default: return Axpy(a[0], x[0], y, n);
    }
  }

  template <std::size_t M>
  static void DotBlock(const double* __restrict g, const double* const* x,
                       std::size_t n, double* out) {
    double acc[M] = {};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < M; ++j) acc[j] += g[i] * x[j][i];
    for (std::size_t j = 0; j < M; ++j) out[j] = acc[j];
  }

  static void MultiDot(const double* g, const double* const* x, std::size_t m,
                       std::size_t n, double* out) {
    if (m == kBlock) return DotBlock<kBlock>(g, x, n, out);
    for (std::size_t j = 0; j < m; ++j) out[j] = Dot(g, x[j], n);
  }

  std::vector<Link> by_out_;
  std::vector<Link> by_in_;
};

std::uint32_t U32(std::size_t v) { return static_cast<std::uint32_t>(v); }

// Sets every row of output channel c to bias[c].
void FillBias(const double* bias, std::size_t channels, std::size_t bins,
              std::size_t frames, double* y) {
  for (std::size_t c = 0; c < channels; ++c)
    std::fill(y + c * bins * frames, y + (c + 1) * bins * frames, bias[c]);
}

void BiasGradient(const double* g, std::size_t channels, std::size_t bins,
                  std::size_t frames, double* grad_b) {
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t f = 0; f < bins; ++f)
      grad_b[c] += Sum(g + (c * bins + f) * frames, frames);
}

// Shared body of the frequency convolutions and the dense layer: weights
// first, then one bias per output channel.
class MixingLayer : public Layer {
 public:
  MixingLayer(LayerSpec spec, FeatureShape in) : Layer(spec, in) {}

  Tensor Forward(std::span<const double> params, const Tensor& in,
                 LayerCache* cache, std::size_t) const override {
    CheckInput(in);
    const std::size_t frames = in.frames();
    auto out = Tensor::Zeros(out_.channels, out_.bins, frames);
    FillBias(params.data() + weight_count_, out_.channels, out_.bins, frames,
             out.raw());
    mixer_.Apply(params.data(), in.raw(), out.raw(), frames);
    if (cache) cache->input = in;
    return out;
  }

  Tensor Backward(std::span<const double> params, const LayerCache& cache,
                  const Tensor& grad_out,
                  std::span<double> grad_params) const override {
    const Tensor& in = cache.input;
    const std::size_t frames = in.frames();
    BiasGradient(grad_out.raw(), out_.channels, out_.bins, frames,
                 grad_params.data() + weight_count_);
    mixer_.WeightGradient(grad_out.raw(), in.raw(), grad_params.data(), frames);
    auto grad_in = Tensor::Zeros(in_.channels, in_.bins, frames);
    mixer_.ApplyTransposed(params.data(), grad_out.raw(), grad_in.raw(), frames);
    return grad_in;
  }

 protected:
  void SetLinks(std::vector<RowMixer::Link> links, std::size_t weight_count) {
    weight_count_ = weight_count;
    mixer_ = RowMixer(std::move(links));
  }

 private:
  RowMixer mixer_;
  std::size_t weight_count_ = 0;
};

// out[co][fo] = b[co] + sum_{ci, tap} W[co][ci][tap] in[ci][fo * stride + tap
// - padding].
class ConvFreq final : public MixingLayer {
 public:
  ConvFreq(LayerSpec spec, FeatureShape in) : MixingLayer(spec, in) {
    const std::size_t k = spec_.kernel;
    std::vector<RowMixer::Link> links;
    for (std::size_t co = 0; co < out_.channels; ++co)
      for (std::size_t fo = 0; fo < out_.bins; ++fo)
        for (std::size_t ci = 0; ci < in_.channels; ++ci)
          for (std::size_t tap = 0; tap < k; ++tap) {
            std::size_t fi;
            if (ConvSource(fo, tap, spec_, in_.bins, &fi))
              links.push_back({U32(ci * in_.bins + fi), U32(co * out_.bins + fo),
                               U32((co * in_.channels + ci) * k + tap)});
          }
    SetLinks(std::move(links), out_.channels * in_.channels * k);
  }

  void Initialize(std::span<double> params, Rng& rng) const override {
    const std::size_t k = spec_.kernel;
    const std::size_t n_w = out_.channels * in_.channels * k;
    FillUniform(params.first(n_w),
                GlorotLimit(in_.channels * k, out_.channels * k), rng);
    std::fill(params.begin() + n_w, params.end(), 0.0);
  }
};

// Adjoint of ConvFreq in frequency: in[ci][fi] spreads to out[co][fi * stride
// + tap - padding] with weight W[ci][co][tap].
class ConvTransposeFreq final : public MixingLayer {
 public:
  ConvTransposeFreq(LayerSpec spec, FeatureShape in) : MixingLayer(spec, in) {
    const std::size_t k = spec_.kernel;
    std::vector<RowMixer::Link> links;
    for (std::size_t ci = 0; ci < in_.channels; ++ci)
      for (std::size_t fi = 0; fi < in_.bins; ++fi)
        for (std::size_t co = 0; co < out_.channels; ++co)
          for (std::size_t tap = 0; tap < k; ++tap) {
            const std::ptrdiff_t pos =
                static_cast<std::ptrdiff_t>(fi * spec_.stride + tap) -
                static_cast<std::ptrdiff_t>(spec_.padding);
            if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(out_.bins))
              continue;
            links.push_back({U32(ci * in_.bins + fi),
                             U32(co * out_.bins + static_cast<std::size_t>(pos)),
                             U32((ci * out_.channels + co) * k + tap)});
          }
    SetLinks(std::move(links), in_.channels * out_.channels * k);
  }

  void Initialize(std::span<double> params, Rng& rng) const override {
    const std::size_t k = spec_.kernel;
    const std::size_t n_w = in_.channels * out_.channels * k;
    FillUniform(params.first(n_w),
                GlorotLimit(in_.channels * k, out_.channels * k), rng);
    std::fill(params.begin() + n_w, params.end(), 0.0);
  }
};


class Relu final : public Layer {
 public:
  using Layer::Layer;

  Tensor Forward(std::span<const double>, const Tensor& in,
                 LayerCache* cache, std::size_t) const override {
    CheckInput(in);
    Tensor out = in;
    for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
    if (cache) cache->output = out;
    return out;
  }

  Tensor Backward(std::span<const double>, const LayerCache& cache,
                  const Tensor& grad_out, std::span<double>) const override {
    Tensor grad_in = grad_out;
    auto y = cache.output.data();
    auto g = grad_in.data();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!(y[i] > 0.0)) g[i] = 0.0;
    return grad_in;
  }
};

class Sigmoid final : public Layer {
 public:
  using Layer::Layer;

  Tensor Forward(std::span<const double>, const Tensor& in,
                 LayerCache* cache, std::size_t) const override {
    CheckInput(in);
    Tensor out = in;
    for (double& v : out.data()) v = Logistic(v);
    if (cache) cache->output = out;
    return out;
  }

  Tensor Backward(std::span<const double>, const LayerCache& cache,
                  const Tensor& grad_out, std::span<double>) const override {
    Tensor grad_in = grad_out;
    auto y = cache.output.data();
    auto g = grad_in.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= y[i] * (1.0 - y[i]);
    return grad_in;
  }
};

// y[u][t] = b[u] + sum_d W[u][d] x[d][t], with x the frame's flattened
// channels x bins features.
std::vector<RowMixer::Link> DenseLinks(std::size_t units, std::size_t dim) {
  std::vector<RowMixer::Link> links;
  links.reserve(units * dim);
  for (std::size_t u = 0; u < units; ++u)
    for (std::size_t d = 0; d < dim; ++d)
      links.push_back({U32(d), U32(u), U32(u * dim + d)});
  return links;
}

class FullyConnected final : public MixingLayer {
 public:
  FullyConnected(LayerSpec spec, FeatureShape in) : MixingLayer(spec, in) {
    SetLinks(DenseLinks(spec_.units, in_.size()), spec_.units * in_.size());
  }

  void Initialize(std::span<double> params, Rng& rng) const override {
    const std::size_t n_w = spec_.units * in_.size();
    FillUniform(params.first(n_w), GlorotLimit(in_.size(), spec_.units), rng);
    std::fill(params.begin() + n_w, params.end(), 0.0);
  }
};

// Gate order i, f, g, o. Parameters: W (4H x D), U (4H x H), b (4H).
// aux holds post-activation gates (4H x T) followed by cell states (H x T).
class Lstm final : public Layer {
 public:
  Lstm(LayerSpec spec, FeatureShape in)
      : Layer(spec, in), input_(DenseLinks(4 * spec.units, in.size())) {}

  void Initialize(std::span<double> params, Rng& rng) const override {
    const std::size_t h = spec_.units;
    const std::size_t d = in_.size();
    FillUniform(params.first(4 * h * d), GlorotLimit(d, 4 * h), rng);
    FillUniform(params.subspan(4 * h * d, 4 * h * h), GlorotLimit(h, 4 * h),
                rng);
    std::fill(params.begin() + 4 * h * (d + h), params.end(), 0.0);
  }

  Tensor Forward(std::span<const double> params, const Tensor& in,
                 LayerCache* cache, std::size_t sequence) const override {
    CheckInput(in);
    const std::size_t frames = in.frames();
    const std::size_t run =
        sequence > 0 ? sequence : std::max<std::size_t>(frames, 1);
    const std::size_t h = spec_.units;
    const std::size_t d = in_.size();
    const double* w_in = params.data();
    const double* w_rec = w_in + 4 * h * d;
    const double* bias = w_rec + 4 * h * h;

    // Input contributions for all frames at once: gates[r][t].
    std::vector<double> gates(4 * h * frames);
    FillBias(bias, 4 * h, 1, frames, gates.data());
    input_.Apply(w_in, in.raw(), gates.data(), frames);
    std::vector<double> cell(h * frames);
    auto out = Tensor::Zeros(h, 1, frames);
    std::vector<double> h_prev(h, 0.0), c_prev(h, 0.0), z(4 * h);
    for (std::size_t t = 0; t < frames; ++t) {
      if (t % run == 0) {
        std::fill(h_prev.begin(), h_prev.end(), 0.0);
        std::fill(c_prev.begin(), c_prev.end(), 0.0);
      }
      for (std::size_t r = 0; r < 4 * h; ++r)
        z[r] = gates[r * frames + t] + Dot(w_rec + r * h, h_prev.data(), h);
      for (std::size_t u = 0; u < h; ++u) {
        const double ig = Logistic(z[u]);
        const double fg = Logistic(z[h + u]);
        const double gg = std::tanh(z[2 * h + u]);
        const double og = Logistic(z[3 * h + u]);
        const double c = fg * c_prev[u] + ig * gg;
        gates[u * frames + t] = ig;
        gates[(h + u) * frames + t] = fg;
        gates[(2 * h + u) * frames + t] = gg;
        gates[(3 * h + u) * frames + t] = og;
        cell[u * frames + t] = c;
        out.at(u, 0, t) = og * std::tanh(c);
      }
      for (std::size_t u = 0; u < h; ++u) {
        h_prev[u] = out.at(u, 0, t);
        c_prev[u] = cell[u * frames + t];
      }
    }
    if (cache) {
      cache->sequence = run;
      cache->input = in;
      cache->output = out;
      cache->aux = std::move(gates);
      cache->aux.insert(cache->aux.end(), cell.begin(), cell.end());
    }
    return out;
  }

  Tensor Backward(std::span<const double> params, const LayerCache& cache,
                  const Tensor& grad_out,
                  std::span<double> grad_params) const override {
    const Tensor& in = cache.input;
    const std::size_t frames = in.frames();
    const std::size_t h = spec_.units;
    const std::size_t d = in_.size();
    const double* w_in = params.data();
    const double* w_rec = w_in + 4 * h * d;
    double* g_win = grad_params.data();
    double* g_wrec = g_win + 4 * h * d;
    double* g_bias = g_wrec + 4 * h * h;
    const double* gates = cache.aux.data();
    const double* cell = gates + 4 * h * frames;
    const Tensor& hidden = cache.output;
    const std::size_t run =
        cache.sequence > 0 ? cache.sequence : std::max<std::size_t>(frames, 1);

    std::vector<double> dz(4 * h * frames, 0.0);
    std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0), dz_t(4 * h);
    for (std::size_t t = frames; t-- > 0;) {
      const bool first = t % run == 0;
      if (t % run == run - 1) {
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        std::fill(dc_next.begin(), dc_next.end(), 0.0);
      }
      for (std::size_t u = 0; u < h; ++u) {
        const double ig = gates[u * frames + t];
        const double fg = gates[(h + u) * frames + t];
        const double gg = gates[(2 * h + u) * frames + t];
        const double og = gates[(3 * h + u) * frames + t];
        const double c = cell[u * frames + t];
        const double c_prev = first ? 0.0 : cell[u * frames + t - 1];
        const double tc = std::tanh(c);
        const double dh = grad_out.at(u, 0, t) + dh_next[u];
        const double dc = dh * og * (1.0 - tc * tc) + dc_next[u];
        dz_t[u] = dc * gg * ig * (1.0 - ig);
        dz_t[h + u] = dc * c_prev * fg * (1.0 - fg);
        dz_t[2 * h + u] = dc * ig * (1.0 - gg * gg);
        dz_t[3 * h + u] = dh * tc * og * (1.0 - og);
        dc_next[u] = dc * fg;
      }
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      for (std::size_t r = 0; r < 4 * h; ++r) {
        const double g = dz_t[r];
        dz[r * frames + t] = g;
        if (!first)
          for (std::size_t u = 0; u < h; ++u) {
            g_wrec[r * h + u] += g * hidden.at(u, 0, t - 1);
            dh_next[u] += w_rec[r * h + u] * g;
          }
      }
    }
    BiasGradient(dz.data(), 4 * h, 1, frames, g_bias);
    input_.WeightGradient(dz.data(), in.raw(), g_win, frames);
    auto grad_in = Tensor::Zeros(in_.channels, in_.bins, frames);
    input_.ApplyTransposed(w_in, dz.data(), grad_in.raw(), frames);
    return grad_in;
  }

 private:
  RowMixer input_;
};

}  // namespace

std::string ToString(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConvFreq: return "conv2d-freq";
    case LayerKind::kConvTransposeFreq: return "conv2d-transposed-freq";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kSigmoid: return "sigmoid";
    case LayerKind::kLstm: return "lstm";
    case LayerKind::kFullyConnected: return "fully-connected";
  }
  return "?";
}

LayerKind ParseLayerKind(const std::string& name) {
  for (auto kind : {LayerKind::kConvFreq, LayerKind::kConvTransposeFreq,
                    LayerKind::kRelu, LayerKind::kSigmoid, LayerKind::kLstm,
                    LayerKind::kFullyConnected})
    if (ToString(kind) == name) return kind;
  throw UsageError("unknown layer kind: " + name);
}

LayerSpec LayerSpec::Conv(std::size_t maps, std::size_t kernel,
                          std::size_t stride) {
  LayerSpec s{LayerKind::kConvFreq};
  s.feature_maps = maps;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = (kernel - 1) / 2;
  return s;
}

LayerSpec LayerSpec::ConvTranspose(std::size_t maps, std::size_t kernel,
                                   std::size_t stride,
                                   std::size_t output_padding) {
  LayerSpec s{LayerKind::kConvTransposeFreq};
  s.feature_maps = maps;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = (kernel - 1) / 2;
  s.output_padding = output_padding;
  return s;
}

LayerSpec LayerSpec::Lstm(std::size_t units) {
  LayerSpec s{LayerKind::kLstm};
  s.units = units;
  return s;
}

LayerSpec LayerSpec::FullyConnected(std::size_t units) {
  LayerSpec s{LayerKind::kFullyConnected};
  s.units = units;
  return s;
}

FeatureShape PropagateShape(const LayerSpec& s, FeatureShape in) {
  if (in.channels == 0 || in.bins == 0)
    throw UsageError("layer input shape must be non-empty");
  switch (s.kind) {
    case LayerKind::kConvFreq: {
      if (s.feature_maps < 1 || s.kernel < 1 || s.stride < 1)
        throw UsageError("conv2d-freq: C_f, C_k, C_s must be >= 1");
      if (in.bins + 2 * s.padding < s.kernel)
        throw UsageError("conv2d-freq: kernel larger than padded input");
      return {s.feature_maps, (in.bins + 2 * s.padding - s.kernel) / s.stride + 1};
    }
    case LayerKind::kConvTransposeFreq: {
      if (s.feature_maps < 1 || s.kernel < 1 || s.stride < 1)
        throw UsageError("conv2d-transposed-freq: C_f, C_k, C_s must be >= 1");
      if (s.output_padding >= s.stride)
        throw UsageError("conv2d-transposed-freq: output_padding must be < stride");
      const std::size_t full = (in.bins - 1) * s.stride + s.kernel + s.output_padding;
      if (full <= 2 * s.padding)
        throw UsageError("conv2d-transposed-freq: empty output");
      return {s.feature_maps, full - 2 * s.padding};
    }
    case LayerKind::kRelu:
    case LayerKind::kSigmoid:
      return in;
    case LayerKind::kLstm:
    case LayerKind::kFullyConnected:
      if (s.units < 1) throw UsageError(ToString(s.kind) + ": units must be >= 1");
      return {s.units, 1};
  }
  return in;
}

std::size_t ParamCount(const LayerSpec& s, FeatureShape in) {
  switch (s.kind) {
    case LayerKind::kConvFreq:
    case LayerKind::kConvTransposeFreq:
      return s.feature_maps * in.channels * s.kernel + s.feature_maps;
    case LayerKind::kRelu:
    case LayerKind::kSigmoid:
      return 0;
    case LayerKind::kLstm:
      return 4 * s.units * (in.size() + s.units + 1);
    case LayerKind::kFullyConnected:
      return s.units * in.size() + s.units;
  }
  return 0;
}

Layer::Layer(LayerSpec spec, FeatureShape in)
    : spec_(spec), in_(in), out_(PropagateShape(spec, in)) {}

void Layer::Initialize(std::span<double> params, Rng&) const {
  std::fill(params.begin(), params.end(), 0.0);
}

void Layer::CheckInput(const Tensor& in) const {
  if (in.rank() != 3 || in.channels() != in_.channels ||
      in.bins() != in_.bins)
    throw UsageError(ToString(spec_.kind) + ": expected input (" +
                     std::to_string(in_.channels) + ", " +
                     std::to_string(in_.bins) + ", T), got " + in.ShapeString());
}

std::unique_ptr<Layer> MakeLayer(const LayerSpec& spec, FeatureShape in) {
  switch (spec.kind) {
    case LayerKind::kConvFreq: return std::make_unique<ConvFreq>(spec, in);
    case LayerKind::kConvTransposeFreq:
      return std::make_unique<ConvTransposeFreq>(spec, in);
    case LayerKind::kRelu: return std::make_unique<Relu>(spec, in);
    case LayerKind::kSigmoid: return std::make_unique<Sigmoid>(spec, in);
    case LayerKind::kLstm: return std::make_unique<Lstm>(spec, in);
    case LayerKind::kFullyConnected:
      return std::make_unique<FullyConnected>(spec, in);
  }
  throw UsageError("unknown layer kind");
}

}  // namespace ctxmask::nn
