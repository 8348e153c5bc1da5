// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/nn/trainer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctxmask/masking.h"
#include "ctxmask/nn/optimizer.h"
#include "ctxmask/random.h"

namespace ctxmask::nn {

std::string ToString(LrSchedule schedule) {
  return schedule == LrSchedule::kCosine ? "cosine" : "constant";
}

LrSchedule ParseLrSchedule(const std::string& name) {
  if (name == "constant") return LrSchedule::kConstant;
  if (name == "cosine") return LrSchedule::kCosine;
  throw UsageError("train: unknown learning-rate schedule: " + name);
}

double ScheduledLearningRate(const TrainConfig& cfg, std::size_t step,
                             std::size_t total_steps) {
  if (cfg.lr_schedule == LrSchedule::kConstant || total_steps == 0)
    return cfg.learning_rate;
  const double x = static_cast<double>(step) / static_cast<double>(total_steps);
  return cfg.learning_rate * 0.5 * (1.0 + std::cos(std::acos(-1.0) * x));
}

void TrainConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw UsageError("train: learning_rate must be >= 0");
  if (batch_size < 1) throw UsageError("train: batch_size must be >= 1");
  if (crop_windows < 1) throw UsageError("train: crop_windows must be >= 1");
  if (crops_per_example < 1)
    throw UsageError("train: crops_per_example must be >= 1");
  if (!(loss_compression > 0.0))
    throw UsageError("train: loss compression must be positive");
}

CropLoss CropLossAndGradient(const Model& model, const TrainingExample& ex,
                             std::size_t start_frame, std::size_t windows,
                             double compression, std::span<double> grads) {
  const CropRef crop{&ex, start_frame};
  return BatchLossAndGradient(model, {&crop, 1}, windows, compression,
                              grads)[0];
}

std::vector<CropLoss> BatchLossAndGradient(const Model& model,
                                           std::span<const CropRef> crops,
                                           std::size_t windows,
                                           double compression,
                                           std::span<double> grads) {
  const std::size_t w_in = model.input_context();
  const std::size_t w_out = model.output_context();
  const std::size_t bins = model.bins();
  const std::size_t span = windows + w_in - 1;
  const std::size_t count = crops.size();
  if (windows < 1) throw UsageError("train: crop needs at least one window");
  for (const CropRef& c : crops) {
    const TrainingExample& ex = *c.example;
    if (!ex.features.SameShape(ex.noisy_mag) ||
        !ex.features.SameShape(ex.clean_mag) || ex.features.bins() != bins)
      throw UsageError("train: example grids disagree in shape");
    if (c.start_frame + span > ex.features.frames())
      throw UsageError("train: crop exceeds utterance");
  }

  const std::size_t cols = count * windows;
  auto input = Tensor::Zeros(w_in, bins, cols);
  for (std::size_t j = 0; j < w_in; ++j)
    for (std::size_t f = 0; f < bins; ++f) {
      double* dst = input.row(j, f);
      for (std::size_t c = 0; c < count; ++c)
        for (std::size_t k = 0; k < windows; ++k)
          dst[c * windows + k] =
              crops[c].example->features(crops[c].start_frame + k + j, f);
    }

  Model::Tape tape;
  const bool want_grad = !grads.empty();
  const Tensor mask =
      model.Forward(input, want_grad ? &tape : nullptr, windows);

  // Output channel j of window k refers to this utterance frame.
  const std::size_t per_crop = w_out * bins * windows;
  std::vector<double> estimate(per_crop), target(per_crop), noisy(per_crop);
  std::vector<double> grad_est(want_grad ? per_crop : 0);
  Tensor grad_mask;
  if (want_grad) grad_mask = Tensor(mask.shape());
  std::vector<CropLoss> result(count);
  for (std::size_t c = 0; c < count; ++c) {
    const TrainingExample& ex = *crops[c].example;
    auto frame_of = [&](std::size_t j, std::size_t k) {
      return crops[c].start_frame + k + (w_out == w_in ? j : w_in - 1);
    };
    for (std::size_t j = 0; j < w_out; ++j)
      for (std::size_t f = 0; f < bins; ++f)
        for (std::size_t k = 0; k < windows; ++k) {
          const std::size_t i = (j * bins + f) * windows + k;
          const std::size_t t = frame_of(j, k);
          noisy[i] = ex.noisy_mag(t, f);
          estimate[i] = mask.at(j, f, c * windows + k) * noisy[i];
          target[i] = ex.clean_mag(t, f);
        }
    result[c].loss = CompressedMseFlat(estimate, target, compression, grad_est);
    result[c].terms = per_crop;
    if (want_grad)
      for (std::size_t j = 0; j < w_out; ++j)
        for (std::size_t f = 0; f < bins; ++f)
          for (std::size_t k = 0; k < windows; ++k) {
            const std::size_t i = (j * bins + f) * windows + k;
            grad_mask.at(j, f, c * windows + k) = grad_est[i] * noisy[i];
          }
  }
  if (want_grad) model.Backward(tape, grad_mask, grads);
  return result;
}

namespace {

struct Crop {
  std::size_t example;
  std::size_t start;
  std::size_t windows;
};

std::vector<Crop> DrawCrops(std::span<const TrainingExample> data,
                            std::size_t w_in, const TrainConfig& cfg) {
  Rng rng(cfg.seed, 0xc209);
  std::vector<Crop> crops;
  for (std::size_t e = 0; e < data.size(); ++e) {
    const std::size_t frames = data[e].features.frames();
    if (frames < w_in)
      throw UsageError("train: example " + std::to_string(e) +
                       " is shorter than the context window");
    const std::size_t available = frames - w_in + 1;
    const std::size_t windows = std::min(cfg.crop_windows, available);
    for (std::size_t c = 0; c < cfg.crops_per_example; ++c)
      crops.push_back({e, static_cast<std::size_t>(rng.Below(available - windows + 1)),
                       windows});
  }
  return crops;
}

}  // namespace

TrainLog Train(Model& model, std::span<const TrainingExample> data,
               const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.Validate();
  if (data.empty()) throw UsageError("train: empty dataset");
  const auto crops = DrawCrops(data, model.input_context(), cfg);
  Adam adam(model.param_count(), {cfg.learning_rate, cfg.adam_beta1,
                                  cfg.adam_beta2, cfg.adam_epsilon});
  std::vector<std::size_t> order(crops.size());
  std::vector<double> crop_loss(crops.size());
  std::vector<double> grads(model.param_count());
  TrainLog log;
  const std::size_t batches =
      (crops.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = batches * cfg.epochs;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng(cfg.seed, 0x5eed0000 + epoch).Shuffle(order);

    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      std::fill(grads.begin(), grads.end(), 0.0);
      // Runs of equal-length crops share one pass.
      for (std::size_t b = begin; b < end;) {
        const std::size_t windows = crops[order[b]].windows;
        std::vector<CropRef> run;
        std::size_t e = b;
        for (; e < end && crops[order[e]].windows == windows; ++e)
          run.push_back({&data[crops[order[e]].example], crops[order[e]].start});
        const auto losses = BatchLossAndGradient(model, run, windows,
                                                 cfg.loss_compression, grads);
        for (std::size_t i = b; i < e; ++i) {
          const Crop& crop = crops[order[i]];
          if (!std::isfinite(losses[i - b].loss))
            throw NumericError("train: non-finite loss at epoch " +
                               std::to_string(epoch + 1) + ", example " +
                               std::to_string(crop.example) + ", frame " +
                               std::to_string(crop.start));
          crop_loss[order[i]] = losses[i - b].loss;
        }
        b = e;
      }
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (double& g : grads) g *= scale;
      adam.set_learning_rate(
          ScheduledLearningRate(cfg, log.steps, total_steps));
      adam.Step(model.params(), grads);
      ++log.steps;
    }

    // Index order, not batch order, so the mean is independent of shuffling.
    double total = 0.0;
    for (double l : crop_loss) total += l;
    const double mean = total / static_cast<double>(crop_loss.size());
    log.epoch_loss.push_back(mean);
    if (on_epoch) on_epoch(epoch + 1, mean);
  }
  for (double p : model.params())
    if (!std::isfinite(p))
      throw NumericError("train: non-finite parameter after training");
  return log;
}

}  // namespace ctxmask::nn
