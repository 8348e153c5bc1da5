// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/commands.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctxmask/data/corpus.h"
#include "ctxmask/data/pipeline.h"
#include "ctxmask/errors.h"
#include "ctxmask/grid_io.h"
#include "ctxmask/masking.h"
#include "ctxmask/nn/checkpoint.h"
#include "ctxmask/wav_io.h"

namespace ctxmask::cmd {
namespace fs = std::filesystem;

namespace {

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << text;
  if (!f) throw DataError("write failed: " + path);
}

std::string BucketLabel(double bucket) { return FormatDouble(bucket); }

void AppendRows(std::vector<ReportRow>& rows, const std::string& label,
                const ContextWindowConfig& ctx, const std::string& bucket,
                const MetricValues& v) {
  rows.push_back({label, ctx.w_in(), ctx.w_out(), bucket, "snr_db", v.snr_db});
  rows.push_back({label, ctx.w_in(), ctx.w_out(), bucket, "si_sdr_db", v.si_sdr_db});
  rows.push_back({label, ctx.w_in(), ctx.w_out(), bucket, "lsd_db", v.lsd_db});
}

}  // namespace

std::string MakeCorpus(const std::string& out_dir, std::uint64_t seed,
                       std::size_t speech_files, std::size_t noise_files) {
  data::CorpusSpec spec;
  spec.speech_files = speech_files;
  spec.noise_files = noise_files;
  return data::WriteCorpus(out_dir, seed, spec);
}

void Synth(const std::string& manifest_path, const std::string& out_dir,
           std::uint64_t seed, std::size_t count, data::Split split,
           const RunConfig& cfg) {
  data::DatasetManifest manifest = data::DatasetManifest::Load(manifest_path);
  manifest.seed = seed;
  manifest.split = split;
  data::WriteDataset(manifest, out_dir, count, cfg.data, cfg.stft);
}

std::vector<nn::TrainingExample> LoadTrainingSet(const std::string& dataset_dir,
                                                 const StftConfig& stft) {
  const auto entries = data::ReadDatasetIndex(dataset_dir);
  if (entries.empty()) throw DataError("dataset is empty: " + dataset_dir);
  std::vector<nn::TrainingExample> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    const auto ex = data::LoadExample(dataset_dir, e);
    const auto noisy_mag = Magnitude(Stft(ex.noisy, stft));
    out.push_back({Normalize(noisy_mag).values, noisy_mag,
                   Magnitude(Stft(ex.clean, stft))});
  }
  return out;
}

std::string LossCsvPath(const std::string& checkpoint) {
  return checkpoint + ".loss.csv";
}

void SaveModel(const std::string& checkpoint, const RunConfig& cfg,
               const nn::Model& model) {
  nn::Checkpoint ckpt{cfg.ToText(),
                      {model.params().begin(), model.params().end()}};
  nn::SaveCheckpoint(checkpoint, ckpt);
}

LoadedModel LoadModel(const std::string& checkpoint) {
  const nn::Checkpoint ckpt = nn::LoadCheckpoint(checkpoint);
  RunConfig cfg;
  try {
    cfg = RunConfig::Parse(ckpt.config_text);
  } catch (const UsageError& e) {
    throw DataError(checkpoint + ": bad embedded config: " + e.what());
  }
  nn::Model model(cfg.model_config());
  if (model.param_count() != ckpt.params.size())
    throw DataError(checkpoint + ": expected " +
                    std::to_string(model.param_count()) + " parameters, found " +
                    std::to_string(ckpt.params.size()));
  std::copy(ckpt.params.begin(), ckpt.params.end(), model.params().begin());
  return {std::move(cfg), std::move(model)};
}

nn::TrainLog Train(const RunConfig& cfg, const std::string& dataset_dir,
                   const std::string& checkpoint_out,
                   const nn::EpochCallback& on_epoch) {
  cfg.Validate();
  const auto examples = LoadTrainingSet(dataset_dir, cfg.stft);
  nn::Model model(cfg.model_config());
  model.Initialize(cfg.train.seed);
  const nn::TrainLog log = nn::Train(model, examples, cfg.train, on_epoch);

  std::ostringstream csv;
  csv << "epoch,loss\n";
  for (std::size_t i = 0; i < log.epoch_loss.size(); ++i)
    csv << (i + 1) << ',' << FormatDouble(log.epoch_loss[i]) << '\n';
  SaveModel(checkpoint_out, cfg, model);
  WriteText(LossCsvPath(checkpoint_out), csv.str());
  return log;
}

RatioMask EstimateMask(const MaskEstimator& estimator,
                       const ComplexSpectrogram& noisy,
                       const ContextWindowConfig& context) {
  if (noisy.frames() < context.w_in())
    throw DataError("input has " + std::to_string(noisy.frames()) +
                    " frames, shorter than the " +
                    std::to_string(context.w_in()) + "-frame context");
  const RealGrid features = Normalize(Magnitude(noisy)).values;
  return RunSlidingInference(estimator, features, context);
}

Waveform Resynthesize(const RatioMask& mask, const ComplexSpectrogram& noisy,
                      const StftConfig& stft, std::size_t length) {
  Waveform out = Istft(ApplyMask(mask, noisy), stft);
  out.samples.resize(length, 0.0);
  return out;
}

void Denoise(const MaskEstimator& estimator, const ContextWindowConfig& context,
             const StftConfig& stft, const std::string& in_wav,
             const std::string& out_wav, const std::string& mask_out) {
  const Waveform in = ReadWav(in_wav);
  if (in.size() < stft.frame_len)
    throw DataError(in_wav + ": shorter than one STFT frame");
  const ComplexSpectrogram noisy = Stft(in, stft);
  const RatioMask mask = EstimateMask(estimator, noisy, context);
  WriteWav(out_wav, Resynthesize(mask, noisy, stft, in.size()));
  if (!mask_out.empty()) WriteGrid(mask_out, mask.grid());
}

EvalResult Evaluate(const EvalSubject& subject, const std::string& dataset_dir,
                    const StftConfig& stft) {
  const auto entries = data::ReadDatasetIndex(dataset_dir);
  if (entries.empty()) throw DataError("dataset is empty: " + dataset_dir);
  EvalResult result;
  for (const auto& e : entries) {
    const auto ex = data::LoadExample(dataset_dir, e);
    const ComplexSpectrogram noisy = Stft(ex.noisy, stft);
    const ComplexSpectrogram clean = Stft(ex.clean, stft);
    const MagnitudeSpectrogram clean_mag = Magnitude(clean);

    RatioMask mask;
    if (subject.estimator) {
      mask = EstimateMask(*subject.estimator, noisy, subject.context);
    } else {
      mask = IdealRatioMask(clean, Stft(ex.noise, stft),
                            CompressionBeta(subject.beta));
    }
    const Waveform enhanced = Resynthesize(mask, noisy, stft, ex.noisy.size());

    const double bucket = NearestSnrBucket(e.snr_db);
    result.noisy.Add(bucket, {SnrDb(ex.clean.samples, ex.noisy.samples),
                              SiSdrDb(ex.clean.samples, ex.noisy.samples),
                              LsdDb(clean_mag, Magnitude(noisy))});
    result.enhanced.Add(bucket,
                        {SnrDb(ex.clean.samples, enhanced.samples),
                         SiSdrDb(ex.clean.samples, enhanced.samples),
                         LsdDb(clean_mag, Magnitude(ApplyMask(mask, noisy)))});
  }

  const ContextWindowConfig none;
  for (double b : kSnrBuckets)
    if (result.noisy.count(b) == 0)
      result.warnings.push_back("no test examples in the " + BucketLabel(b) +
                                " dB bucket; omitted");
  for (int pass = 0; pass < 2; ++pass) {
    const MetricReport& report = pass == 0 ? result.noisy : result.enhanced;
    const std::string label = pass == 0 ? "noisy" : subject.label;
    const ContextWindowConfig& ctx = pass == 0 ? none : subject.context;
    for (double b : kSnrBuckets)
      if (const auto mean = report.Mean(b))
        AppendRows(result.rows, label, ctx, BucketLabel(b), *mean);
    AppendRows(result.rows, label, ctx, "all", *report.MeanAll());
  }
  return result;
}

void WriteReport(const std::string& path, const EvalResult& result) {
  WriteText(path, FormatReportCsv(result.rows));
}

double LatencyMs(std::size_t w, std::size_t hop_samples, int sample_rate_hz) {
  if (w == 0) throw UsageError("latency: w must be >= 1");
  if (hop_samples == 0 || sample_rate_hz <= 0)
    throw UsageError("latency: hop and sample rate must be positive");
  // Multiply before dividing so whole-millisecond results are exact.
  return static_cast<double>(w - 1) * static_cast<double>(hop_samples) *
         1000.0 / sample_rate_hz;
}

}  // namespace ctxmask::cmd
