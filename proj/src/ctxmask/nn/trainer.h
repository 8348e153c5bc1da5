// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_NN_TRAINER_H_
#define CTXMASK_NN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/grid.h"
#include "ctxmask/nn/model.h"

namespace ctxmask::nn {

// Step-size schedule over the whole run. Cosine anneals from learning_rate
// at the first step towards zero at the last.
enum class LrSchedule { kConstant, kCosine };
std::string ToString(LrSchedule schedule);
LrSchedule ParseLrSchedule(const std::string& name);

struct TrainConfig {
  double learning_rate = 5e-4;
  LrSchedule lr_schedule = LrSchedule::kConstant;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Each training item is a crop giving this many context windows.
  std::size_t crop_windows = 16;
  // Crops drawn per utterance, once, before the first epoch.
  std::size_t crops_per_example = 16;
  double loss_compression = 0.3;

  void Validate() const;
};

// Learning rate of update `step` (0-based) out of `total_steps`.
double ScheduledLearningRate(const TrainConfig& cfg, std::size_t step,
                             std::size_t total_steps);

// One utterance in the feature domain.
struct TrainingExample {
  RealGrid features;   // normalized noisy magnitude, the model input
  RealGrid noisy_mag;  // |Y|, the mask is applied to this
  RealGrid clean_mag;  // |S|, the target
};

struct CropLoss {
  double loss = 0.0;
  // Number of (window position, bin, window) terms summed: w_out * F * K.
  std::size_t terms = 0;
};

// Compressed-MSE loss of one crop starting at `start_frame` and spanning
// `windows` context windows. With w_out == w_in every frame of every window
// is scored (the windowed loss); with w_out == 1 only the newest frame. When
// grads is non-empty the parameter gradient is accumulated into it.
CropLoss CropLossAndGradient(const Model& model, const TrainingExample& ex,
                             std::size_t start_frame, std::size_t windows,
                             double compression, std::span<double> grads);

struct CropRef {
  const TrainingExample* example;
  std::size_t start_frame;
};

// Several equal-length crops in one forward/backward pass, laid end to end
// on the frames axis as independent sequences. Per-crop losses match
// CropLossAndGradient; the gradient is their sum.
std::vector<CropLoss> BatchLossAndGradient(const Model& model,
                                           std::span<const CropRef> crops,
                                           std::size_t windows,
                                           double compression,
                                           std::span<double> grads);

struct TrainLog {
  // Mean per-crop loss of each epoch, measured before each batch's update.
  std::vector<double> epoch_loss;
  std::size_t steps = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Mini-batch Adam over a fixed, seeded set of crops. Batch gradients are the
// crop-gradient sum divided by the batch size. Throws NumericError when a
// loss becomes non-finite.
TrainLog Train(Model& model, std::span<const TrainingExample> data,
               const TrainConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace ctxmask::nn

#endif  // CTXMASK_NN_TRAINER_H_
