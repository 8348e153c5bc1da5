// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Command-line front end. Talks to the library only through the C API.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ctxmask/ctxmask.h"

namespace {

struct Failure {
  ctxmask_status status;
};

void Check(ctxmask_status s) {
  if (s != CTXMASK_OK) throw Failure{s};
}

std::string Shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

class Config {
 public:
  Config() { Check(ctxmask_config_new(&cfg_)); }
  explicit Config(const std::string& path) {
    Check(ctxmask_config_load(path.c_str(), &cfg_));
  }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
  ~Config() { ctxmask_config_free(cfg_); }

  void Set(const std::string& key, const std::string& value) {
    Check(ctxmask_config_set(cfg_, key.c_str(), value.c_str()));
  }
  std::string Text() const {
    size_t needed = 0;
    Check(ctxmask_config_to_text(cfg_, nullptr, 0, &needed));
    std::string text(needed, '\0');
    Check(ctxmask_config_to_text(cfg_, text.data(), text.size(), &needed));
    text.resize(needed - 1);
    return text;
  }
  const ctxmask_config* get() const { return cfg_; }

 private:
  ctxmask_config* cfg_ = nullptr;
};

class Model {
 public:
  explicit Model(ctxmask_model* m) : m_(m) {}
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  ~Model() { ctxmask_model_free(m_); }
  const ctxmask_model* get() const { return m_; }
  ctxmask_model_info Info() const {
    ctxmask_model_info info{};
    Check(ctxmask_model_info_get(m_, &info));
    return info;
  }

 private:
  ctxmask_model* m_;
};

// Flags shared by the commands that build a run configuration.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> w_in;
  std::optional<std::size_t> w_out;
  std::optional<std::string> model;
  std::optional<double> beta;

  void AddTo(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file");
    cmd->add_option("--seed", seed, "seed for every random draw");
    cmd->add_option("--w-in", w_in, "input context in frames");
    cmd->add_option("--w-out", w_out, "output context: 1 or w_in");
    cmd->add_option("--model", model, "architecture")
        ->check(CLI::IsMember({"cdae", "crn"}));
    cmd->add_option("--beta", beta, "ratio-mask compression in (0, 1]");
  }

  // w_out follows w_in unless given.
  std::unique_ptr<Config> Build() const {
    auto cfg = config_path.empty() ? std::make_unique<Config>()
                                   : std::make_unique<Config>(config_path);
    if (seed) cfg->Set("train.seed", std::to_string(*seed));
    if (model) cfg->Set("model.architecture", *model);
    if (w_in) {
      cfg->Set("context.w_in", std::to_string(*w_in));
      cfg->Set("context.w_out", std::to_string(w_out.value_or(*w_in)));
    } else if (w_out) {
      cfg->Set("context.w_out", std::to_string(*w_out));
    }
    if (beta) cfg->Set("eval.beta", Shortest(*beta));
    return cfg;
  }
};

void PrintWarning(const char* message, void*) {
  std::cerr << "warning: " << message << "\n";
}

void PrintEpoch(size_t epoch, double loss, void*) {
  std::cerr << "epoch " << epoch << " loss " << Shortest(loss) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-window speech enhancement: synthesis, training, "
               "denoising and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ctxmask_version()));

  // make-corpus
  auto* corpus = app.add_subcommand("make-corpus", "write a synthetic speech and noise corpus");
  std::string corpus_out;
  std::uint64_t corpus_seed = 1;
  std::size_t n_speech = 48, n_noise = 24;
  corpus->add_option("--out", corpus_out, "output directory")->required();
  corpus->add_option("--seed", corpus_seed, "corpus seed");
  corpus->add_option("--speech", n_speech, "number of speech files");
  corpus->add_option("--noise", n_noise, "number of noise files");

  // synth
  auto* synth = app.add_subcommand("synth", "mix a dataset of 10 s examples");
  Common synth_common;
  std::string manifest, synth_out, split = "train";
  std::size_t count = 0;
  synth->add_option("--manifest", manifest, "speech/noise manifest")->required();
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--count", count, "number of examples")->required();
  synth->add_option("--split", split, "train or test")
      ->check(CLI::IsMember({"train", "test"}));
  synth_common.AddTo(synth);

  // train
  auto* train = app.add_subcommand("train", "train a mask estimator");
  Common train_common;
  std::string train_data, train_ckpt;
  std::optional<std::size_t> epochs;
  train->add_option("--data", train_data, "dataset directory")->required();
  train->add_option("--checkpoint", train_ckpt, "checkpoint to write")->required();
  train->add_option("--epochs", epochs, "override train.epochs");
  train_common.AddTo(train);

  // denoise
  auto* denoise = app.add_subcommand("denoise", "enhance one WAV file");
  Common denoise_common;
  std::string in_wav, out_wav, denoise_ckpt, mask_out;
  std::optional<double> stub;
  denoise->add_option("--in", in_wav, "noisy 16 kHz mono WAV")->required();
  denoise->add_option("--out", out_wav, "enhanced WAV")->required();
  auto* ckpt_opt = denoise->add_option("--checkpoint", denoise_ckpt, "trained model");
  auto* stub_opt = denoise->add_option("--stub-mask", stub, "constant mask value instead of a model");
  ckpt_opt->excludes(stub_opt);
  denoise->add_option("--mask-out", mask_out, "also write the mask as a grid file");
  denoise_common.AddTo(denoise);

  // eval
  auto* eval = app.add_subcommand("eval", "score a model on a dataset");
  Common eval_common;
  std::string eval_data, report, eval_ckpt;
  bool oracle = false;
  eval->add_option("--data", eval_data, "dataset directory")->required();
  eval->add_option("--report", report, "CSV report to write")->required();
  auto* eval_ckpt_opt = eval->add_option("--checkpoint", eval_ckpt, "trained model");
  auto* oracle_opt = eval->add_flag("--oracle", oracle, "use the ideal ratio mask");
  eval_ckpt_opt->excludes(oracle_opt);
  eval_common.AddTo(eval);

  // latency
  auto* latency = app.add_subcommand("latency", "added latency of a context window");
  std::size_t lat_w = 1, hop = 64;
  int rate = 16000;
  latency->add_option("-w,--w", lat_w, "context window in frames")->required();
  latency->add_option("--hop", hop, "hop in samples");
  latency->add_option("--sample-rate", rate, "sample rate in Hz");

  // params
  auto* params = app.add_subcommand("params", "count trainable parameters");
  Common params_common;
  params_common.AddTo(params);

  // config
  auto* config = app.add_subcommand("config", "print the normalized configuration");
  Common config_common;
  config_common.AddTo(config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : CTXMASK_ERR_USAGE;
  }

  try {
    if (*corpus) {
      Check(ctxmask_make_corpus(corpus_out.c_str(), corpus_seed, n_speech, n_noise));
    } else if (*synth) {
      const auto cfg = synth_common.Build();
      Check(ctxmask_synth(cfg->get(), manifest.c_str(), synth_out.c_str(),
                          synth_common.seed.value_or(1), count, split == "test"));
    } else if (*train) {
      const auto cfg = train_common.Build();
      if (epochs) cfg->Set("train.epochs", std::to_string(*epochs));
      Check(ctxmask_train(cfg->get(), train_data.c_str(), train_ckpt.c_str(),
                          PrintEpoch, nullptr));
    } else if (*denoise) {
      ctxmask_model* raw = nullptr;
      if (stub) {
        const std::size_t w = denoise_common.w_in.value_or(1);
        Check(ctxmask_model_new_constant(*stub, w, denoise_common.w_out.value_or(w), &raw));
      } else if (!denoise_ckpt.empty()) {
        Check(ctxmask_model_load(denoise_ckpt.c_str(), &raw));
      } else {
        std::cerr << "error: denoise needs --checkpoint or --stub-mask\n";
        return CTXMASK_ERR_USAGE;
      }
      const Model model(raw);
      const auto info = model.Info();
      const std::size_t w_in = denoise_common.w_in.value_or(info.w_in);
      const std::size_t w_out = denoise_common.w_out.value_or(
          denoise_common.w_in ? w_in : info.w_out);
      Check(ctxmask_denoise(model.get(), w_in, w_out, in_wav.c_str(), out_wav.c_str(),
                            mask_out.empty() ? nullptr : mask_out.c_str()));
    } else if (*eval) {
      if (oracle) {
        Check(ctxmask_eval(nullptr, 1, 1, eval_common.beta.value_or(0.5),
                           eval_data.c_str(), report.c_str(), PrintWarning, nullptr));
      } else if (!eval_ckpt.empty()) {
        ctxmask_model* raw = nullptr;
        Check(ctxmask_model_load(eval_ckpt.c_str(), &raw));
        const Model model(raw);
        const auto info = model.Info();
        const std::size_t w_in = eval_common.w_in.value_or(info.w_in);
        const std::size_t w_out = eval_common.w_out.value_or(
            eval_common.w_in ? w_in : info.w_out);
        Check(ctxmask_eval(model.get(), w_in, w_out, 0.5, eval_data.c_str(),
                           report.c_str(), PrintWarning, nullptr));
      } else {
        std::cerr << "error: eval needs --checkpoint or --oracle\n";
        return CTXMASK_ERR_USAGE;
      }
    } else if (*latency) {
      double ms = 0.0;
      Check(ctxmask_latency_ms(lat_w, hop, rate, &ms));
      std::cout << Shortest(ms) << " ms\n";
    } else if (*params) {
      const auto cfg = params_common.Build();
      size_t n = 0;
      Check(ctxmask_count_params(cfg->get(), &n));
      const auto base = params_common.Build();
      base->Set("context.w_in", "1");
      base->Set("context.w_out", "1");
      double pct = 0.0;
      Check(ctxmask_param_increase_pct(cfg->get(), base->get(), &pct));
      std::cout << "params " << n << "\n"
                << "increase_vs_w1_pct " << Shortest(pct) << "\n";
    } else if (*config) {
      std::cout << config_common.Build()->Text();
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << ctxmask_last_error() << "\n";
    return f.status;
  }
  return 0;
}
