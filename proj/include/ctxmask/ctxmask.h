/* Copyright 2026 The ctxmask Authors
 * License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
 *
 * C interface to the ctxmask speech-enhancement library. Every call returns
 * a status code; on failure ctxmask_last_error() describes the problem for
 * the calling thread. Handles are opaque and owned by the caller.
 */

#ifndef CTXMASK_CTXMASK_H_
#define CTXMASK_CTXMASK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CTXMASK_BUILDING_LIBRARY)
#define CTXMASK_API __attribute__((visibility("default")))
#else
#define CTXMASK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CTXMASK_OK = 0,
  CTXMASK_ERR_USAGE = 1,    /* bad arguments or configuration */
  CTXMASK_ERR_DATA = 2,     /* I/O or file format */
  CTXMASK_ERR_NUMERIC = 3,  /* non-finite values during training */
  CTXMASK_ERR_INTERNAL = 4
} ctxmask_status;

/* Message of the last failed call on this thread; "" if none. */
CTXMASK_API const char* ctxmask_last_error(void);
CTXMASK_API const char* ctxmask_version(void);

/* ---- run configuration ------------------------------------------------ */

typedef struct ctxmask_config ctxmask_config;

CTXMASK_API ctxmask_status ctxmask_config_new(ctxmask_config** out);
CTXMASK_API ctxmask_status ctxmask_config_load(const char* path,
                                               ctxmask_config** out);
CTXMASK_API ctxmask_status ctxmask_config_parse(const char* text,
                                                ctxmask_config** out);
/* key is "section.name", e.g. "train.epochs". */
CTXMASK_API ctxmask_status ctxmask_config_set(ctxmask_config* cfg,
                                              const char* key,
                                              const char* value);
/* Canonical text. Writes at most cap bytes including the terminator;
 * *needed receives the full size including the terminator. */
CTXMASK_API ctxmask_status ctxmask_config_to_text(const ctxmask_config* cfg,
                                                  char* buf, size_t cap,
                                                  size_t* needed);
CTXMASK_API void ctxmask_config_free(ctxmask_config* cfg);

CTXMASK_API ctxmask_status ctxmask_count_params(const ctxmask_config* cfg,
                                                size_t* out);
/* 100 * (params(cfg) - params(baseline)) / params(baseline). */
CTXMASK_API ctxmask_status ctxmask_param_increase_pct(
    const ctxmask_config* cfg, const ctxmask_config* baseline, double* out);

/* ---- mask estimators --------------------------------------------------- */

typedef struct ctxmask_model ctxmask_model;

typedef struct {
  size_t w_in;
  size_t w_out;
  size_t bins;
  size_t param_count;
  int trainable; /* 0 for constant stubs */
} ctxmask_model_info;

/* Freshly initialized network described by cfg, seeded by train.seed. */
CTXMASK_API ctxmask_status ctxmask_model_new(const ctxmask_config* cfg,
                                             ctxmask_model** out);
/* Emits `value` for every bin; uses the default STFT settings. */
CTXMASK_API ctxmask_status ctxmask_model_new_constant(double value,
                                                      size_t w_in,
                                                      size_t w_out,
                                                      ctxmask_model** out);
CTXMASK_API ctxmask_status ctxmask_model_load(const char* path,
                                              ctxmask_model** out);
CTXMASK_API ctxmask_status ctxmask_model_save(const ctxmask_model* model,
                                              const char* path);
CTXMASK_API ctxmask_status ctxmask_model_info_get(const ctxmask_model* model,
                                                  ctxmask_model_info* out);
CTXMASK_API void ctxmask_model_free(ctxmask_model* model);

/* Full-utterance mask from normalized features (frames x bins, row-major).
 * w_out selects sliding (== w_in) or last-frame (1) inference. */
CTXMASK_API ctxmask_status ctxmask_model_estimate(const ctxmask_model* model,
                                                  const double* features,
                                                  size_t frames, size_t bins,
                                                  size_t w_out,
                                                  double* mask_out);

/* ---- pipeline commands ------------------------------------------------- */

typedef void (*ctxmask_epoch_fn)(size_t epoch, double loss, void* user);
typedef void (*ctxmask_warning_fn)(const char* message, void* user);

/* Synthetic speech and noise files plus manifest.txt in out_dir. */
CTXMASK_API ctxmask_status ctxmask_make_corpus(const char* out_dir,
                                               uint64_t seed,
                                               size_t speech_files,
                                               size_t noise_files);
/* test_split: 0 draws training SNRs, 1 draws the evaluation buckets. */
CTXMASK_API ctxmask_status ctxmask_synth(const ctxmask_config* cfg,
                                         const char* manifest,
                                         const char* out_dir, uint64_t seed,
                                         size_t count, int test_split);
/* Also writes "<checkpoint_out>.loss.csv". on_epoch may be NULL. */
CTXMASK_API ctxmask_status ctxmask_train(const ctxmask_config* cfg,
                                         const char* dataset_dir,
                                         const char* checkpoint_out,
                                         ctxmask_epoch_fn on_epoch,
                                         void* user);
/* mask_out may be NULL; otherwise the mask is written as a grid file. */
CTXMASK_API ctxmask_status ctxmask_denoise(const ctxmask_model* model,
                                           size_t w_in, size_t w_out,
                                           const char* in_wav,
                                           const char* out_wav,
                                           const char* mask_out);
/* model NULL evaluates the ideal ratio mask with compression beta. */
CTXMASK_API ctxmask_status ctxmask_eval(const ctxmask_model* model,
                                        size_t w_in, size_t w_out,
                                        double beta, const char* dataset_dir,
                                        const char* report_csv,
                                        ctxmask_warning_fn on_warning,
                                        void* user);
CTXMASK_API ctxmask_status ctxmask_latency_ms(size_t w, size_t hop_samples,
                                              int sample_rate_hz, double* out);

/* ---- numerical building blocks ----------------------------------------- */

/* estimates: windows x w x bins, window k row j referring to frame k + j.
 * out: (windows + w - 1) x bins. */
CTXMASK_API ctxmask_status ctxmask_combine(const double* estimates,
                                           size_t windows, size_t w,
                                           size_t bins, double* out);
/* Ratio mask from speech and noise magnitudes, n entries. */
CTXMASK_API ctxmask_status ctxmask_irm(const double* speech_mag,
                                       const double* noise_mag, size_t n,
                                       double beta, double* out);
CTXMASK_API ctxmask_status ctxmask_snr_db(const double* ref, const double* deg,
                                          size_t n, double* out);
CTXMASK_API ctxmask_status ctxmask_si_sdr_db(const double* ref,
                                             const double* deg, size_t n,
                                             double* out);

#ifdef __cplusplus
}
#endif

#endif /* CTXMASK_CTXMASK_H_ */
