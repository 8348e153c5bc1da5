// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_COMMANDS_H_
#define CTXMASK_COMMANDS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctxmask/config.h"
#include "ctxmask/context_window.h"
#include "ctxmask/metrics.h"
#include "ctxmask/nn/model.h"

// End-to-end operations shared by the C API and the command-line tool.
namespace ctxmask::cmd {

std::string MakeCorpus(const std::string& out_dir, std::uint64_t seed,
                       std::size_t speech_files, std::size_t noise_files);

void Synth(const std::string& manifest_path, const std::string& out_dir,
           std::uint64_t seed, std::size_t count, data::Split split,
           const RunConfig& cfg);

// Loads every example of a dataset into the feature domain.
std::vector<nn::TrainingExample> LoadTrainingSet(const std::string& dataset_dir,
                                                 const StftConfig& stft);

// Writes the checkpoint and, next to it, "<checkpoint>.loss.csv" with one
// "epoch,loss" row per epoch. With zero epochs the initial weights are saved.
nn::TrainLog Train(const RunConfig& cfg, const std::string& dataset_dir,
                   const std::string& checkpoint_out,
                   const nn::EpochCallback& on_epoch = {});

std::string LossCsvPath(const std::string& checkpoint);

struct LoadedModel {
  RunConfig config;
  nn::Model model;
};
LoadedModel LoadModel(const std::string& checkpoint);
void SaveModel(const std::string& checkpoint, const RunConfig& cfg,
               const nn::Model& model);

// Mask for a noisy spectrogram: features are normalized |Y|, then the
// estimator runs in sliding or last-frame mode.
RatioMask EstimateMask(const MaskEstimator& estimator,
                       const ComplexSpectrogram& noisy,
                       const ContextWindowConfig& context);

// iSTFT of M (.) Y, zero-padded or cut to `length` samples.
Waveform Resynthesize(const RatioMask& mask, const ComplexSpectrogram& noisy,
                      const StftConfig& stft, std::size_t length);

void Denoise(const MaskEstimator& estimator, const ContextWindowConfig& context,
             const StftConfig& stft, const std::string& in_wav,
             const std::string& out_wav, const std::string& mask_out = "");

// Either a trained estimator or the ideal ratio mask with compression beta.
struct EvalSubject {
  std::string label;
  const MaskEstimator* estimator = nullptr;  // null: oracle mask
  ContextWindowConfig context;
  double beta = 0.5;
};

struct EvalResult {
  MetricReport noisy;
  MetricReport enhanced;
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
};

// Noisy-baseline rows (model "noisy") then subject rows, for every
// non-empty SNR bucket and "all". Throws DataError on an empty dataset.
EvalResult Evaluate(const EvalSubject& subject, const std::string& dataset_dir,
                    const StftConfig& stft);

// Writes FormatReportCsv(result.rows).
void WriteReport(const std::string& path, const EvalResult& result);

double LatencyMs(std::size_t w, std::size_t hop_samples, int sample_rate_hz);

}  // namespace ctxmask::cmd

#endif  // CTXMASK_COMMANDS_H_
