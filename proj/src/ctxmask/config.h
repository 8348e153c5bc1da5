// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_CONFIG_H_
#define CTXMASK_CONFIG_H_

#include <string>

#include "ctxmask/data/pipeline.h"
#include "ctxmask/dsp.h"
#include "ctxmask/nn/model.h"
#include "ctxmask/nn/trainer.h"

namespace ctxmask {

// Everything a run needs, as one value. Text form:
//
//   [section]
//   key = value
//
// with '#' comments. Sections: stft, model, context, train, data, eval.
// Missing keys keep their defaults; unknown sections or keys are errors.
struct RunConfig {
  StftConfig stft;
  int sample_rate_hz = kSampleRateHz;

  nn::Architecture architecture = nn::Architecture::kCdae;
  nn::ReferenceModelOptions model;

  std::size_t w_in = 1;
  std::size_t w_out = 1;

  nn::TrainConfig train;
  data::MixRanges data;

  double beta = 0.5;

  static RunConfig Parse(const std::string& text);
  static RunConfig Load(const std::string& path);

  // Canonical text: every key, fixed order, shortest round-trip numbers.
  std::string ToText() const;

  // Sets one value by dotted name, e.g. "train.epochs".
  void Set(const std::string& dotted_key, const std::string& value);

  ContextWindowConfig context() const { return {w_in, w_out}; }
  nn::ModelConfig model_config() const;

  void Validate() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.ToText() == b.ToText();
  }
};

}  // namespace ctxmask

#endif  // CTXMASK_CONFIG_H_
