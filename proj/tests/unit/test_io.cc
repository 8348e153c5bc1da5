// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <fstream>

#include "ctxmask/config.h"
#include "ctxmask/errors.h"
#include "ctxmask/grid_io.h"
#include "ctxmask/wav_io.h"
#include "doctest.h"
#include "test_util.h"

using namespace ctxmask;

namespace {

void Put16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = v & 0xff;
  b[at + 1] = v >> 8;
}

void Put32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = (v >> (8 * i)) & 0xff;
}

}  // namespace

TEST_CASE("wav round trip is exact at 16-bit resolution") {
  Rng rng(1);
  Waveform w{testutil::RandomVector(rng, 1000)};
  const auto bytes = EncodeWav(w);
  CHECK(bytes.size() == 44 + 2000);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RIFF");
  const Waveform back = DecodeWav(bytes);
  for (std::size_t i = 0; i < 1000; ++i)
    CHECK(std::abs(back.samples[i] - w.samples[i]) <= 0.5 / 32767 + 1e-12);
  CHECK(EncodeWav(back) == bytes);

  const auto pcm = QuantizePcm16({1.5, -1.5, 0.0, 1.0});
  CHECK(pcm == std::vector<std::int16_t>{32767, -32768, 0, 32767});
}

TEST_CASE("wav format errors") {
  const auto good = EncodeWav(Waveform{{0.1, 0.2}});
  auto stereo = good;
  Put16(stereo, 22, 2);
  CHECK_THROWS_WITH_AS(DecodeWav(stereo, "x.wav"), doctest::Contains("mono"), DataError);
  auto rate = good;
  Put32(rate, 24, 8000);
  CHECK_THROWS_WITH_AS(DecodeWav(rate, "x.wav"), doctest::Contains("16000"), DataError);
  auto bits = good;
  Put16(bits, 34, 8);
  CHECK_THROWS_AS(DecodeWav(bits), DataError);
  auto fmt = good;
  Put16(fmt, 20, 3);
  CHECK_THROWS_AS(DecodeWav(fmt), DataError);
  auto riff = good;
  riff[0] = 'X';
  CHECK_THROWS_AS(DecodeWav(riff), DataError);
  auto truncated = good;
  truncated.resize(40);
  CHECK_THROWS_AS(DecodeWav(truncated), DataError);
  CHECK_THROWS_WITH_AS(ReadWav("/nonexistent/a.wav"), doctest::Contains("/nonexistent/a.wav"), DataError);
  CHECK_THROWS_AS(EncodeWav(Waveform{{0.0}, 8000}), UsageError);
}

TEST_CASE("wav reader skips unknown chunks") {
  auto bytes = EncodeWav(Waveform{{0.25, -0.25}});
  // Insert a "LIST" chunk between fmt and data.
  std::vector<std::uint8_t> extra = {'L', 'I', 'S', 'T', 4, 0, 0, 0, 'a', 'b', 'c', 'd'};
  bytes.insert(bytes.begin() + 36, extra.begin(), extra.end());
  Put32(bytes, 4, static_cast<std::uint32_t>(bytes.size() - 8));
  const Waveform w = DecodeWav(bytes);
  REQUIRE(w.size() == 2);
  CHECK(w.samples[0] == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("grid files") {
  testutil::TempDir dir("grid");
  RealGrid g(3, 2, std::vector<double>{1, 2, 3, 4, 5, -6.5e-300});
  WriteGrid(dir / "g.bin", g);
  CHECK(ReadRealGrid(dir / "g.bin") == g);
  const auto bytes = testutil::ReadBytes(dir / "g.bin");
  CHECK(bytes.size() == 12 + 6 * 8);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "CMGR");
  CHECK(bytes[4] == 3);
  CHECK(bytes[8] == 2);

  ComplexSpectrogram c(1, 2, std::vector<std::complex<double>>{{1, -1}, {0.5, 2}});
  WriteGrid(dir / "c.bin", c);
  CHECK(ReadComplexGrid(dir / "c.bin") == c);
  CHECK_THROWS_AS(ReadRealGrid(dir / "c.bin"), DataError);

  std::ofstream(dir / "short.bin", std::ios::binary) << "CMGR\x01";
  CHECK_THROWS_AS(ReadRealGrid(dir / "short.bin"), DataError);
  CHECK_THROWS_AS(ReadRealGrid(dir / "missing.bin"), DataError);
}

TEST_CASE("run config text round trips") {
  const RunConfig defaults;
  const std::string text = defaults.ToText();
  CHECK(RunConfig::Parse(text).ToText() == text);
  CHECK(RunConfig::Parse("").ToText() == text);

  const RunConfig custom = RunConfig::Parse(
      "# comment\n[context]\nw_in = 8\nw_out = 8\n[train]\nlearning_rate=0.001\n"
      "[model]\narchitecture = crn\nencoder_channels = 4, 8\n");
  CHECK(custom.w_in == 8);
  CHECK(custom.train.learning_rate == 0.001);
  CHECK(custom.architecture == nn::Architecture::kCrn);
  CHECK(custom.model.channels == std::vector<std::size_t>{4, 8});
  CHECK(RunConfig::Parse(custom.ToText()) == custom);
  CHECK(custom.model_config().context == ContextWindowConfig(8, 8));

  CHECK(text.find("learning_rate = 5e-04") != std::string::npos);
  CHECK(text.find("batch_size = 32") != std::string::npos);
  CHECK(text.find("beta = 0.5") != std::string::npos);
  CHECK(text.find("window = hann") != std::string::npos);
}

TEST_CASE("run config errors") {
  CHECK_THROWS_AS(RunConfig::Parse("[train]\nlearnig_rate = 1\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("[network]\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("w_in = 3\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("[context]\nw_in = 8\nw_out = 3\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("[train]\nbatch_size = 0\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("[train]\nlearning_rate = fast\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("[eval]\nbeta = 0\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Parse("[stft]\nsample_rate = 8000\n"), UsageError);
  CHECK_THROWS_AS(RunConfig::Load("/nonexistent.ini"), DataError);
  RunConfig c;
  CHECK_THROWS_AS(c.Set("train.nope", "1"), UsageError);
  c.Set("train.epochs", "3");
  CHECK(c.train.epochs == 3);
  c.Set("train.lr_schedule", "cosine");
  CHECK(RunConfig::Parse(c.ToText()).train.lr_schedule == nn::LrSchedule::kCosine);
  CHECK_THROWS_AS(c.Set("train.lr_schedule", "linear"), UsageError);
}
