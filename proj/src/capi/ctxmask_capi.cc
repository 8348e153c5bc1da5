// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/ctxmask.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "ctxmask/commands.h"
#include "ctxmask/context_window.h"
#include "ctxmask/errors.h"
#include "ctxmask/masking.h"
#include "ctxmask/metrics.h"

struct ctxmask_config {
  ctxmask::RunConfig cfg;
};

struct ctxmask_model {
  ctxmask::RunConfig cfg;
  std::unique_ptr<ctxmask::nn::Model> net;
  std::unique_ptr<ctxmask::nn::ConstantEstimator> constant;

  const ctxmask::MaskEstimator& estimator() const {
    if (net) return *net;
    return *constant;
  }
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ctxmask_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CTXMASK_OK;
  } catch (const ctxmask::UsageError& e) {
    g_last_error = e.what();
    return CTXMASK_ERR_USAGE;
  } catch (const ctxmask::DataError& e) {
    g_last_error = e.what();
    return CTXMASK_ERR_DATA;
  } catch (const ctxmask::NumericError& e) {
    g_last_error = e.what();
    return CTXMASK_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CTXMASK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CTXMASK_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CTXMASK_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw ctxmask::UsageError(std::string("null argument: ") + what);
}

}  // namespace

extern "C" {

const char* ctxmask_last_error(void) { return g_last_error.c_str(); }

const char* ctxmask_version(void) { return "0.1.0"; }

ctxmask_status ctxmask_config_new(ctxmask_config** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new ctxmask_config{};
  });
}

ctxmask_status ctxmask_config_load(const char* path, ctxmask_config** out) {
  return Guard([&] {
    Require(path && out, "path/out");
    *out = new ctxmask_config{ctxmask::RunConfig::Load(path)};
  });
}

ctxmask_status ctxmask_config_parse(const char* text, ctxmask_config** out) {
  return Guard([&] {
    Require(text && out, "text/out");
    *out = new ctxmask_config{ctxmask::RunConfig::Parse(text)};
  });
}

ctxmask_status ctxmask_config_set(ctxmask_config* cfg, const char* key,
                                  const char* value) {
  return Guard([&] {
    Require(cfg && key && value, "cfg/key/value");
    ctxmask::RunConfig next = cfg->cfg;
    next.Set(key, value);
    cfg->cfg = next;
  });
}

ctxmask_status ctxmask_config_to_text(const ctxmask_config* cfg, char* buf,
                                      size_t cap, size_t* needed) {
  return Guard([&] {
    Require(cfg, "cfg");
    const std::string text = cfg->cfg.ToText();
    if (needed) *needed = text.size() + 1;
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

void ctxmask_config_free(ctxmask_config* cfg) { delete cfg; }

ctxmask_status ctxmask_count_params(const ctxmask_config* cfg, size_t* out) {
  return Guard([&] {
    Require(cfg && out, "cfg/out");
    cfg->cfg.Validate();
    *out = ctxmask::nn::CountParams(cfg->cfg.model_config());
  });
}

ctxmask_status ctxmask_param_increase_pct(const ctxmask_config* cfg,
                                          const ctxmask_config* baseline,
                                          double* out) {
  return Guard([&] {
    Require(cfg && baseline && out, "cfg/baseline/out");
    cfg->cfg.Validate();
    baseline->cfg.Validate();
    *out = ctxmask::nn::ParamIncreasePercent(cfg->cfg.model_config(),
                                             baseline->cfg.model_config());
  });
}

ctxmask_status ctxmask_model_new(const ctxmask_config* cfg,
                                 ctxmask_model** out) {
  return Guard([&] {
    Require(cfg && out, "cfg/out");
    cfg->cfg.Validate();
    auto m = std::make_unique<ctxmask_model>();
    m->cfg = cfg->cfg;
    m->net = std::make_unique<ctxmask::nn::Model>(cfg->cfg.model_config());
    m->net->Initialize(cfg->cfg.train.seed);
    *out = m.release();
  });
}

ctxmask_status ctxmask_model_new_constant(double value, size_t w_in,
                                          size_t w_out, ctxmask_model** out) {
  return Guard([&] {
    Require(out, "out");
    auto m = std::make_unique<ctxmask_model>();
    m->cfg.w_in = w_in;
    m->cfg.w_out = w_out;
    m->constant = std::make_unique<ctxmask::nn::ConstantEstimator>(
        value, ctxmask::ContextWindowConfig(w_in, w_out), m->cfg.stft.bins());
    *out = m.release();
  });
}

ctxmask_status ctxmask_model_load(const char* path, ctxmask_model** out) {
  return Guard([&] {
    Require(path && out, "path/out");
    auto loaded = ctxmask::cmd::LoadModel(path);
    auto m = std::make_unique<ctxmask_model>();
    m->cfg = loaded.config;
    m->net = std::make_unique<ctxmask::nn::Model>(std::move(loaded.model));
    *out = m.release();
  });
}

ctxmask_status ctxmask_model_save(const ctxmask_model* model,
                                  const char* path) {
  return Guard([&] {
    Require(model && path, "model/path");
    if (!model->net) throw ctxmask::UsageError("constant models have no weights");
    ctxmask::cmd::SaveModel(path, model->cfg, *model->net);
  });
}

ctxmask_status ctxmask_model_info_get(const ctxmask_model* model,
                                      ctxmask_model_info* out) {
  return Guard([&] {
    Require(model && out, "model/out");
    const auto& est = model->estimator();
    out->w_in = est.input_context();
    out->w_out = est.output_context();
    out->bins = est.bins();
    out->param_count = model->net ? model->net->param_count() : 0;
    out->trainable = model->net ? 1 : 0;
  });
}

void ctxmask_model_free(ctxmask_model* model) { delete model; }

ctxmask_status ctxmask_model_estimate(const ctxmask_model* model,
                                      const double* features, size_t frames,
                                      size_t bins, size_t w_out,
                                      double* mask_out) {
  return Guard([&] {
    Require(model && features && mask_out, "model/features/mask_out");
    const auto& est = model->estimator();
    ctxmask::RealGrid grid(frames, bins);
    std::copy(features, features + frames * bins, grid.values().begin());
    const ctxmask::RatioMask mask = ctxmask::RunSlidingInference(
        est, grid, ctxmask::ContextWindowConfig(est.input_context(), w_out));
    std::copy(mask.grid().values().begin(), mask.grid().values().end(),
              mask_out);
  });
}

ctxmask_status ctxmask_make_corpus(const char* out_dir, uint64_t seed,
                                   size_t speech_files, size_t noise_files) {
  return Guard([&] {
    Require(out_dir, "out_dir");
    ctxmask::cmd::MakeCorpus(out_dir, seed, speech_files, noise_files);
  });
}

ctxmask_status ctxmask_synth(const ctxmask_config* cfg, const char* manifest,
                             const char* out_dir, uint64_t seed, size_t count,
                             int test_split) {
  return Guard([&] {
    Require(cfg && manifest && out_dir, "cfg/manifest/out_dir");
    cfg->cfg.Validate();
    ctxmask::cmd::Synth(manifest, out_dir, seed, count,
                        test_split ? ctxmask::data::Split::kTest
                                   : ctxmask::data::Split::kTrain,
                        cfg->cfg);
  });
}

ctxmask_status ctxmask_train(const ctxmask_config* cfg,
                             const char* dataset_dir,
                             const char* checkpoint_out,
                             ctxmask_epoch_fn on_epoch, void* user) {
  return Guard([&] {
    Require(cfg && dataset_dir && checkpoint_out,
            "cfg/dataset_dir/checkpoint_out");
    ctxmask::nn::EpochCallback cb;
    if (on_epoch)
      cb = [&](std::size_t epoch, double loss) { on_epoch(epoch, loss, user); };
    ctxmask::cmd::Train(cfg->cfg, dataset_dir, checkpoint_out, cb);
  });
}

ctxmask_status ctxmask_denoise(const ctxmask_model* model, size_t w_in,
                               size_t w_out, const char* in_wav,
                               const char* out_wav, const char* mask_out) {
  return Guard([&] {
    Require(model && in_wav && out_wav, "model/in_wav/out_wav");
    ctxmask::cmd::Denoise(model->estimator(),
                          ctxmask::ContextWindowConfig(w_in, w_out),
                          model->cfg.stft, in_wav, out_wav,
                          mask_out ? mask_out : "");
  });
}

ctxmask_status ctxmask_eval(const ctxmask_model* model, size_t w_in,
                            size_t w_out, double beta, const char* dataset_dir,
                            const char* report_csv,
                            ctxmask_warning_fn on_warning, void* user) {
  return Guard([&] {
    Require(dataset_dir && report_csv, "dataset_dir/report_csv");
    ctxmask::cmd::EvalSubject subject;
    ctxmask::StftConfig stft;
    if (model) {
      subject.estimator = &model->estimator();
      subject.context = ctxmask::ContextWindowConfig(w_in, w_out);
      subject.label = model->net ? ctxmask::nn::ToString(model->cfg.architecture)
                                 : "constant";
      stft = model->cfg.stft;
    } else {
      ctxmask::CompressionBeta checked(beta);
      subject.beta = checked.value();
      subject.label = "oracle-irm";
    }
    const auto result = ctxmask::cmd::Evaluate(subject, dataset_dir, stft);
    if (on_warning)
      for (const auto& w : result.warnings) on_warning(w.c_str(), user);
    ctxmask::cmd::WriteReport(report_csv, result);
  });
}

ctxmask_status ctxmask_latency_ms(size_t w, size_t hop_samples,
                                  int sample_rate_hz, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = ctxmask::cmd::LatencyMs(w, hop_samples, sample_rate_hz);
  });
}

ctxmask_status ctxmask_combine(const double* estimates, size_t windows,
                               size_t w, size_t bins, double* out) {
  return Guard([&] {
    Require(estimates && out, "estimates/out");
    if (windows == 0 || w == 0 || bins == 0)
      throw ctxmask::UsageError("combine: empty input");
    ctxmask::WindowedEstimates est;
    est.window = w;
    est.bins = bins;
    for (size_t k = 0; k < windows; ++k) {
      ctxmask::RealGrid g(w, bins);
      std::copy(estimates + k * w * bins, estimates + (k + 1) * w * bins,
                g.values().begin());
      est.estimates.push_back(std::move(g));
    }
    const auto mask = ctxmask::Combine(est, windows + w - 1, w);
    std::copy(mask.grid().values().begin(), mask.grid().values().end(), out);
  });
}

ctxmask_status ctxmask_irm(const double* speech_mag, const double* noise_mag,
                           size_t n, double beta, double* out) {
  return Guard([&] {
    Require(speech_mag && noise_mag && out, "speech_mag/noise_mag/out");
    ctxmask::ComplexSpectrogram s(1, n), v(1, n);
    for (size_t i = 0; i < n; ++i) {
      s(0, i) = speech_mag[i];
      v(0, i) = noise_mag[i];
    }
    const auto mask =
        ctxmask::IdealRatioMask(s, v, ctxmask::CompressionBeta(beta));
    std::copy(mask.grid().values().begin(), mask.grid().values().end(), out);
  });
}

ctxmask_status ctxmask_snr_db(const double* ref, const double* deg, size_t n,
                              double* out) {
  return Guard([&] {
    Require(ref && deg && out, "ref/deg/out");
    *out = ctxmask::SnrDb({ref, n}, {deg, n});
  });
}

ctxmask_status ctxmask_si_sdr_db(const double* ref, const double* deg,
                                 size_t n, double* out) {
  return Guard([&] {
    Require(ref && deg && out, "ref/deg/out");
    *out = ctxmask::SiSdrDb({ref, n}, {deg, n});
  });
}

}  // extern "C"
