// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctxmask/commands.h"
#include "ctxmask/config.h"
#include "ctxmask/context_window.h"
#include "ctxmask/data/corpus.h"
#include "ctxmask/data/pipeline.h"
#include "ctxmask/dsp.h"
#include "ctxmask/masking.h"
#include "ctxmask/metrics.h"
#include "ctxmask/nn/layers.h"
#include "ctxmask/nn/model.h"
#include "ctxmask/random.h"

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace ctxmask;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

class WorkDir {
 public:
  WorkDir() {
    path_ = fs::temp_directory_path() /
            ("ctxmask_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~WorkDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the command-line tool; returns its exit status and stdout.
int RunCli(const std::string& args, std::string* out = nullptr) {
  const std::string cmd =
      std::string("\"") + CTXMASK_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  std::array<char, 256> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) text += buf.data();
  const int status = ::pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 1 -------------------------------------------------------------------------

Outcome CombinerOracle() {
  const auto start = Clock::now();
  Rng rng(101);
  const std::size_t bins = 3;
  double worst = 0.0;
  bool counts_ok = true;
  for (std::size_t frames = 1; frames <= 32; ++frames)
    for (std::size_t w = 1; w <= frames; ++w) {
      WindowedEstimates est;
      est.window = w;
      est.bins = bins;
      for (std::size_t k = 0; k + w <= frames; ++k) {
        RealGrid g(w, bins);
        for (double& v : g.values()) v = rng.Uniform();
        est.estimates.push_back(std::move(g));
      }
      const RatioMask mask = Combine(est, frames, w);
      for (std::size_t t = 0; t < frames; ++t) {
        // Every window that contains frame t, in order.
        std::size_t n = 0;
        std::vector<double> sum(bins, 0.0);
        for (std::size_t k = 0; k < est.estimates.size(); ++k)
          if (k <= t && t < k + w) {
            ++n;
            for (std::size_t f = 0; f < bins; ++f)
              sum[f] += est.estimates[k](t - k, f);
          }
        for (std::size_t f = 0; f < bins; ++f)
          worst = std::max(worst, std::abs(mask(t, f) - sum[f] / n));
        const std::size_t s = t + 1;
        const std::size_t expected =
            std::min({s, w, frames - s + 1, frames - w + 1});
        if (n != expected || WindowsCovering(t, frames, w).count() != n)
          counts_ok = false;
      }
    }
  const double elapsed = Seconds(start);
  return {worst <= 1e-15 && counts_ok && elapsed < 1.0,
          "max error " + Fmt(worst) + ", counts " +
              (counts_ok ? "match" : "differ") + ", " + Fmt(elapsed, 3) + " s"};
}

// 2 -------------------------------------------------------------------------

Outcome LatencyCli() {
  const std::pair<int, std::string> cases[] = {
      {1, "0 ms"}, {3, "8 ms"}, {8, "28 ms"}, {13, "48 ms"}};
  std::string detail;
  bool ok = true;
  for (const auto& [w, want] : cases) {
    std::string out;
    const int rc = RunCli("latency -w " + std::to_string(w), &out);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
      out.pop_back();
    ok = ok && rc == 0 && out == want;
    detail += (detail.empty() ? "" : ", ") + ("w=" + std::to_string(w) + " -> " + out);
  }
  return {ok, detail};
}

// 3 -------------------------------------------------------------------------

Outcome StftRoundTrip() {
  const auto start = Clock::now();
  const StftConfig cfg;
  Rng rng(303);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    Waveform wave;
    wave.samples.resize(kSampleRateHz);
    for (double& v : wave.samples) v = rng.Uniform(-1.0, 1.0);
    const Waveform back = Istft(Stft(wave, cfg), cfg);
    // Interior: samples covered by two frames.
    for (std::size_t i = cfg.frame_len; i + cfg.frame_len < back.size(); ++i)
      worst = std::max(worst, std::abs(back.samples[i] - wave.samples[i]));
  }
  const double elapsed = Seconds(start);
  return {worst < 1e-6 && elapsed < 5.0,
          "max interior error " + Fmt(worst) + ", " + Fmt(elapsed, 3) + " s"};
}

// 4 -------------------------------------------------------------------------

double IrmOf(std::complex<double> s, std::complex<double> n, double beta) {
  ComplexSpectrogram speech(1, 1, s), noise(1, 1, n);
  return IdealRatioMask(speech, noise, CompressionBeta(beta))(0, 0);
}

Outcome IrmProperties() {
  Rng rng(404);
  bool in_range = true;
  for (double beta : {0.1, 0.5, 1.0}) {
    ComplexSpectrogram s(50, 65), n(50, 65);
    for (auto& v : s.values()) v = {rng.Uniform(-2, 2), rng.Uniform(-2, 2)};
    for (auto& v : n.values()) v = {rng.Uniform(-2, 2), rng.Uniform(-2, 2)};
    const RatioMask mask = IdealRatioMask(s, n, CompressionBeta(beta));
    for (double m : mask.grid().values())
      in_range = in_range && m >= 0.0 && m <= 1.0;
  }
  const double clean = IrmOf(1.5, 0.0, 0.5);
  const double equal = IrmOf(1.0, 1.0, 1.0);
  const double spot = IrmOf(std::sqrt(3.0), 1.0, 0.5);
  const bool ok = in_range && clean == 1.0 && std::abs(equal - 0.5) <= 1e-12 &&
                  std::abs(spot - 0.8660254037844386) <= 1e-12;
  return {ok, std::string("range ") + (in_range ? "ok" : "violated") +
                  ", noise-free " + Fmt(clean, 17) + ", equal power " +
                  Fmt(equal, 17) + ", 3:1 " + Fmt(spot, 17)};
}

// 5 -------------------------------------------------------------------------

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

double LayerGradientError(const nn::LayerSpec& spec, nn::FeatureShape in,
                          std::size_t frames, std::uint64_t seed) {
  const double h = 1e-5;
  Rng rng(seed);
  const auto layer = nn::MakeLayer(spec, in);
  std::vector<double> params(layer->param_count());
  for (double& p : params) p = rng.Uniform(-0.5, 0.5);
  nn::Tensor x({in.channels, in.bins, frames});
  for (double& v : x.data()) {
    v = rng.Uniform(-1, 1);
    v += v >= 0 ? 0.1 : -0.1;  // away from the ReLU kink
  }
  const auto out = layer->output_shape();
  nn::Tensor r({out.channels, out.bins, frames});
  for (double& v : r.data()) v = rng.Uniform(-1, 1);

  auto loss = [&](const std::vector<double>& p, const nn::Tensor& xi) {
    const nn::Tensor y = layer->Forward(p, xi, nullptr);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += r[i] * y[i];
    return s;
  };
  nn::LayerCache cache;
  layer->Forward(params, x, &cache);
  std::vector<double> gp(params.size(), 0.0);
  const nn::Tensor gx = layer->Backward(params, cache, r, gp);
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto a = params, b = params;
    a[i] += h;
    b[i] -= h;
    worst = std::max(worst, RelErr(gp[i], (loss(a, x) - loss(b, x)) / (2 * h)));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    nn::Tensor a = x, b = x;
    a[i] += h;
    b[i] -= h;
    worst = std::max(worst,
                     RelErr(gx[i], (loss(params, a) - loss(params, b)) / (2 * h)));
  }
  return worst;
}

double LossGradientError() {
  const double h = 1e-6;
  Rng rng(505);
  std::vector<double> est(40), target(40), grad(40), none;
  for (double& v : est) v = rng.Uniform(0.05, 2.0);
  for (double& v : target) v = rng.Uniform(0.0, 2.0);
  CompressedMseFlat(est, target, kDefaultLossCompression, grad);
  double worst = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    auto a = est, b = est;
    a[i] += h;
    b[i] -= h;
    const double fd = (CompressedMseFlat(a, target, kDefaultLossCompression, none) -
                       CompressedMseFlat(b, target, kDefaultLossCompression, none)) /
                      (2 * h);
    worst = std::max(worst, RelErr(grad[i], fd));
  }
  return worst;
}

Outcome GradientChecks() {
  using nn::LayerSpec;
  const auto start = Clock::now();
  struct Case {
    LayerSpec spec;
    nn::FeatureShape in;
    std::size_t frames;
  };
  const Case cases[] = {
      {LayerSpec::Conv(3, 3, 2), {2, 9}, 3},
      {LayerSpec::ConvTranspose(2, 3, 2, 0), {3, 5}, 3},
      {LayerSpec::Relu(), {2, 5}, 3},
      {LayerSpec::Sigmoid(), {2, 5}, 3},
      {LayerSpec::Lstm(3), {2, 2}, 5},
      {LayerSpec::FullyConnected(4), {2, 3}, 3},
  };
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 1;
  for (const Case& c : cases) {
    const double err = LayerGradientError(c.spec, c.in, c.frames, seed++);
    ok = ok && err < 1e-4;
    detail += nn::ToString(c.spec.kind) + " " + Fmt(err, 2) + ", ";
  }
  const double loss_err = LossGradientError();
  ok = ok && loss_err < 1e-4;
  const double elapsed = Seconds(start);
  detail += "loss " + Fmt(loss_err, 2) + ", " + Fmt(elapsed, 3) + " s";
  return {ok && elapsed < 30.0, detail};
}

// 6 -------------------------------------------------------------------------

struct Desk {
  std::string manifest, train, test;
};

Desk MakeDeskData(const WorkDir& dir) {
  Desk d;
  d.manifest = data::WriteCorpus(dir / "corpus", 11, data::CorpusSpec{});
  d.train = dir / "train";
  d.test = dir / "test";
  cmd::Synth(d.manifest, d.train, 21, 64, data::Split::kTrain, RunConfig{});
  cmd::Synth(d.manifest, d.test, 22, 24, data::Split::kTest, RunConfig{});
  return d;
}

Outcome TrainingTrend(const WorkDir& dir, const Desk& desk) {
  const auto start = Clock::now();
  struct Run {
    std::size_t w_in, w_out;
    double ratio = 0.0;
    double si_sdr = 0.0;
    std::size_t params = 0;
  };
  std::vector<Run> runs = {{1, 1}, {8, 1}, {8, 8}};
  const auto train_examples = cmd::LoadTrainingSet(desk.train, StftConfig{});
  std::size_t test_clips = 0;
  bool losses_ok = true, small = true;
  for (Run& run : runs) {
    RunConfig cfg;
    cfg.w_in = run.w_in;
    cfg.w_out = run.w_out;
    cfg.train.learning_rate = 4e-3;
    cfg.train.epochs = 30;
    const std::string ckpt =
        dir / ("cdae_" + std::to_string(run.w_in) + "_" +
               std::to_string(run.w_out) + ".ckpt");
    const nn::TrainLog log = cmd::Train(cfg, desk.train, ckpt);
    run.ratio = log.epoch_loss.back() / log.epoch_loss.front();
    losses_ok = losses_ok && run.ratio <= 0.5;

    const cmd::LoadedModel loaded = cmd::LoadModel(ckpt);
    run.params = loaded.model.param_count();
    small = small && run.params <= 50000;
    cmd::EvalSubject subject{"cdae", &loaded.model, cfg.context(), cfg.beta};
    const cmd::EvalResult result = cmd::Evaluate(subject, desk.test, cfg.stft);
    run.si_sdr = result.enhanced.MeanAll()->si_sdr_db;
    test_clips = result.enhanced.total_count();
  }
  const double elapsed = Seconds(start);
  const bool ordered =
      runs[2].si_sdr >= runs[1].si_sdr && runs[1].si_sdr >= runs[0].si_sdr;
  std::string detail = std::to_string(train_examples.size()) + " train / " +
                       std::to_string(test_clips) + " test clips";
  for (const Run& r : runs)
    detail += "; " + std::to_string(r.w_in) + "/" + std::to_string(r.w_out) +
              ": loss ratio " + Fmt(r.ratio, 3) + ", SI-SDR " +
              Fmt(r.si_sdr, 4) + " dB, " + std::to_string(r.params) + " params";
  detail += "; " + Fmt(elapsed / 60.0, 3) + " min";
  return {losses_ok && ordered && small && train_examples.size() >= 64 &&
              test_clips >= 16 && elapsed < 1800.0,
          detail};
}

// 7 -------------------------------------------------------------------------

Outcome ParameterCost() {
  const nn::Model base(nn::MakeReferenceConfig(nn::Architecture::kCdae, {1, 1}));
  const nn::Model wide(nn::MakeReferenceConfig(nn::Architecture::kCdae, {8, 8}));
  const double pct = 100.0 *
                     (static_cast<double>(wide.param_count()) -
                      static_cast<double>(base.param_count())) /
                     static_cast<double>(base.param_count());
  return {pct <= 1.1, std::to_string(base.param_count()) + " -> " +
                          std::to_string(wide.param_count()) + " params, +" +
                          Fmt(pct, 4) + "%"};
}

// 8 -------------------------------------------------------------------------

Outcome OracleMask(const Desk& desk) {
  const cmd::EvalSubject subject{"oracle-irm", nullptr, {1, 1}, 1.0};
  const cmd::EvalResult result = cmd::Evaluate(subject, desk.test, StftConfig{});
  bool ok = true;
  std::string detail;
  for (double bucket : kSnrBuckets) {
    const auto noisy = result.noisy.Mean(bucket);
    const auto enhanced = result.enhanced.Mean(bucket);
    if (!noisy || !enhanced) {
      ok = false;
      detail += Fmt(bucket) + " dB: empty; ";
      continue;
    }
    const double gain = enhanced->si_sdr_db - noisy->si_sdr_db;
    ok = ok && gain > 3.0;
    detail += Fmt(bucket) + " dB: +" + Fmt(gain, 3) + " dB (" +
              std::to_string(result.enhanced.count(bucket)) + " clips); ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 9 -------------------------------------------------------------------------

Outcome Determinism(const WorkDir& dir, const Desk& desk) {
  {
    std::ofstream ini(dir / "tiny.ini");
    ini << "[train]\nepochs = 2\ncrops_per_example = 2\n";
  }
  bool ok = true;
  std::string detail;
  std::vector<std::string> files[2];
  for (int pass = 0; pass < 2; ++pass) {
    const std::string p = std::to_string(pass);
    const std::string data_dir = dir / ("det_data" + p);
    const std::string ckpt = dir / ("det" + p + ".ckpt");
    const std::string wav = dir / ("det" + p + ".wav");
    ok = ok && RunCli("synth --manifest \"" + desk.manifest + "\" --out \"" +
                      data_dir + "\" --count 4 --seed 9") == 0;
    ok = ok && RunCli("train --config \"" + (dir / "tiny.ini") + "\" --data \"" +
                      data_dir + "\" --checkpoint \"" + ckpt +
                      "\" --w-in 8") == 0;
    ok = ok && RunCli("denoise --checkpoint \"" + ckpt + "\" --in \"" +
                      data_dir + "/example_000000_noisy.wav\" --out \"" + wav +
                      "\"") == 0;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(data_dir))
      paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) files[pass].push_back(ReadAll(path));
    files[pass].push_back(ReadAll(ckpt));
    files[pass].push_back(ReadAll(wav));
  }
  if (!ok) return {false, "command failed"};
  const bool same = files[0] == files[1];
  std::size_t bytes = 0;
  for (const auto& f : files[0]) bytes += f.size();
  return {same && !files[0].empty(),
          std::to_string(files[0].size()) + " outputs, " + std::to_string(bytes) +
              " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name,
                    const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": "
              << o.detail << std::endl;
  };

  report(1, "combiner oracle", CombinerOracle);
  report(2, "latency", LatencyCli);
  report(3, "stft roundtrip", StftRoundTrip);
  report(4, "ratio mask", IrmProperties);
  report(5, "gradients", GradientChecks);

  WorkDir dir;
  Desk desk;
  bool have_data = true;
  try {
    desk = MakeDeskData(dir);
  } catch (const std::exception& e) {
    std::cout << "desk data: " << e.what() << std::endl;
    have_data = false;
  }
  const auto needs_data = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (!have_data) return {false, "no desk data"};
      return fn();
    };
  };
  report(6, "training trend", needs_data([&] { return TrainingTrend(dir, desk); }));
  report(7, "parameter cost", ParameterCost);
  report(8, "oracle mask", needs_data([&] { return OracleMask(desk); }));
  report(9, "determinism", needs_data([&] { return Determinism(dir, desk); }));

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
