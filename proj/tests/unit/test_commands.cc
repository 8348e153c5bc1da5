// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ctxmask/commands.h"
#include "ctxmask/data/corpus.h"
#include "ctxmask/errors.h"
#include "ctxmask/grid_io.h"
#include "ctxmask/wav_io.h"
#include "doctest.h"
#include "test_util.h"

using namespace ctxmask;

namespace {

struct Fixture {
  testutil::TempDir dir{"commands"};
  std::string manifest;
  std::string test_set;

  Fixture() {
    data::CorpusSpec spec;
    spec.speech_files = 4;
    spec.noise_files = 3;
    manifest = data::WriteCorpus(dir / "corpus", 7, spec);
    test_set = dir / "test";
    cmd::Synth(manifest, test_set, 5, 6, data::Split::kTest, RunConfig{});
  }
};

Fixture& Shared() {
  static Fixture f;
  return f;
}

std::string NoisyClip() {
  return (std::filesystem::path(Shared().test_set) / "example_000000_noisy.wav").string();
}

}  // namespace

TEST_CASE("latency in milliseconds") {
  CHECK(cmd::LatencyMs(1, 64, 16000) == 0.0);
  CHECK(cmd::LatencyMs(3, 64, 16000) == 8.0);
  CHECK(cmd::LatencyMs(8, 64, 16000) == 28.0);
  CHECK(cmd::LatencyMs(13, 64, 16000) == 48.0);
  CHECK_THROWS_AS(cmd::LatencyMs(0, 64, 16000), UsageError);
}

TEST_CASE("denoise with constant masks") {
  auto& fx = Shared();
  const Waveform in = ReadWav(NoisyClip());
  const StftConfig stft;

  const nn::ConstantEstimator ones(1.0, {1, 1}, 65);
  cmd::Denoise(ones, {1, 1}, stft, NoisyClip(), fx.dir / "ones.wav");
  const Waveform out = ReadWav(fx.dir / "ones.wav");
  REQUIRE(out.size() == in.size());
  double worst = 0.0;
  for (std::size_t i = 128; i + 256 < in.size(); ++i)
    worst = std::max(worst, std::abs(out.samples[i] - in.samples[i]));
  CHECK(worst <= 1.0 / 32767);

  const nn::ConstantEstimator zeros(0.0, {1, 1}, 65);
  cmd::Denoise(zeros, {1, 1}, stft, NoisyClip(), fx.dir / "zeros.wav");
  for (double v : ReadWav(fx.dir / "zeros.wav").samples) REQUIRE(v == 0.0);

  // Averaging a constant is the identity, so the context size cannot matter.
  const nn::ConstantEstimator c1(0.3, {1, 1}, 65), c8(0.3, {8, 8}, 65);
  cmd::Denoise(c1, {1, 1}, stft, NoisyClip(), fx.dir / "c1.wav");
  cmd::Denoise(c8, {8, 8}, stft, NoisyClip(), fx.dir / "c8.wav", fx.dir / "c8.mask");
  CHECK(testutil::ReadBytes(fx.dir / "c1.wav") == testutil::ReadBytes(fx.dir / "c8.wav"));
  const RealGrid mask = ReadRealGrid(fx.dir / "c8.mask");
  CHECK(mask.frames() == 2499);
  CHECK(mask(0, 0) == 0.3);
}

TEST_CASE("sliding inference runs the model over T - w + 1 windows") {
  // Counts estimator calls through the window extent of its input.
  struct Probe final : MaskEstimator {
    mutable std::size_t windows = 0;
    std::size_t input_context() const override { return 8; }
    std::size_t output_context() const override { return 8; }
    std::size_t bins() const override { return 65; }
    nn::Tensor EstimateWindows(const nn::Tensor& in) const override {
      windows = in.frames();
      return nn::Tensor({8, 65, in.frames()}, 0.5);
    }
  } probe;
  const auto noisy = Stft(ReadWav(NoisyClip()), StftConfig{});
  cmd::EstimateMask(probe, noisy, {8, 8});
  CHECK(probe.windows == noisy.frames() - 7);
}

TEST_CASE("denoise input errors") {
  auto& fx = Shared();
  const nn::ConstantEstimator c(1.0, {8, 8}, 65);
  WriteWav(fx.dir / "short.wav", Waveform{std::vector<double>(300, 0.1)});
  CHECK_THROWS_AS(cmd::Denoise(c, {8, 8}, {}, fx.dir / "short.wav", fx.dir / "o.wav"), DataError);
  WriteWav(fx.dir / "tiny.wav", Waveform{std::vector<double>(100, 0.1)});
  CHECK_THROWS_AS(cmd::Denoise(c, {8, 8}, {}, fx.dir / "tiny.wav", fx.dir / "o.wav"), DataError);
  CHECK_THROWS_AS(cmd::Denoise(c, {8, 8}, {}, fx.dir / "missing.wav", fx.dir / "o.wav"), DataError);
}

TEST_CASE("oracle evaluation beats the noisy baseline") {
  auto& fx = Shared();
  cmd::EvalSubject oracle;
  oracle.label = "oracle-irm";
  oracle.beta = 1.0;
  const auto result = cmd::Evaluate(oracle, fx.test_set, {});
  for (double b : result.noisy.buckets())
    CHECK(result.enhanced.Mean(b)->si_sdr_db > result.noisy.Mean(b)->si_sdr_db);
  // Missing buckets are reported, not emitted.
  CHECK(result.warnings.size() == 4 - result.noisy.buckets().size());
  for (const auto& row : result.rows)
    if (row.snr_bucket != "all")
      CHECK(result.noisy.count(std::stod(row.snr_bucket)) > 0);

  // The noisy rows agree with calling the metrics directly.
  const auto entries = data::ReadDatasetIndex(fx.test_set);
  double sum = 0.0;
  for (const auto& e : entries) {
    const auto ex = data::LoadExample(fx.test_set, e);
    sum += SiSdrDb(ex.clean.samples, ex.noisy.samples);
  }
  CHECK(result.noisy.MeanAll()->si_sdr_db == doctest::Approx(sum / entries.size()).epsilon(1e-12));

  cmd::WriteReport(fx.dir / "report.csv", result);
  CHECK(ParseReportCsv(std::string(testutil::ReadBytes(fx.dir / "report.csv").data(),
                                   testutil::ReadBytes(fx.dir / "report.csv").size()))
            .size() == result.rows.size());

  testutil::TempDir empty("commands_empty");
  data::DatasetManifest m = data::DatasetManifest::Load(fx.manifest);
  data::WriteDataset(m, empty.str(), 0, {}, {});
  CHECK_THROWS_AS(cmd::Evaluate(oracle, empty.str(), {}), DataError);
}

TEST_CASE("train, checkpoint and reload") {
  auto& fx = Shared();
  RunConfig cfg;
  cfg.model.channels = {4, 8};
  cfg.w_in = cfg.w_out = 2;
  cfg.train.epochs = 0;
  cmd::Train(cfg, fx.test_set, fx.dir / "init.ckpt");
  nn::Model init(cfg.model_config());
  init.Initialize(cfg.train.seed);
  const auto loaded = cmd::LoadModel(fx.dir / "init.ckpt");
  CHECK(std::ranges::equal(loaded.model.params(), init.params()));
  CHECK(loaded.config == cfg);

  cfg.train.epochs = 2;
  cfg.train.crops_per_example = 2;
  cmd::Train(cfg, fx.test_set, fx.dir / "a.ckpt");
  cmd::Train(cfg, fx.test_set, fx.dir / "b.ckpt");
  CHECK(testutil::ReadBytes(fx.dir / "a.ckpt") == testutil::ReadBytes(fx.dir / "b.ckpt"));
  std::ifstream csv(cmd::LossCsvPath(fx.dir / "a.ckpt"));
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  CHECK(line == "epoch,loss");
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2);

  std::ofstream(fx.dir / "junk.ckpt") << "not a checkpoint";
  CHECK_THROWS_AS(cmd::LoadModel(fx.dir / "junk.ckpt"), DataError);
}
