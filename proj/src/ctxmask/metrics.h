// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_METRICS_H_
#define CTXMASK_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxmask/grid.h"

namespace ctxmask {

// Perfect reconstructions report this instead of +inf.
inline constexpr double kMetricCapDb = 200.0;
inline constexpr double kLsdEpsilon = 1e-8;

// 10 log10(sum ref^2 / sum (deg - ref)^2).
double SnrDb(std::span<const double> ref, std::span<const double> deg);

// Scale-invariant SDR: deg is projected onto ref; the projection's energy is
// compared to the residual's.
double SiSdrDb(std::span<const double> ref, std::span<const double> deg);

// Mean over frames of the RMS (over bins) of 20 log10((deg + eps)/(ref + eps)).
double LsdDb(const MagnitudeSpectrogram& ref, const MagnitudeSpectrogram& deg);

struct MetricValues {
  double snr_db = 0.0;
  double si_sdr_db = 0.0;
  double lsd_db = 0.0;
};

// SNR buckets reported by evaluation, in dB.
inline constexpr double kSnrBuckets[] = {-5.0, 0.0, 10.0, 20.0};
// Nearest bucket to a mixture SNR.
double NearestSnrBucket(double snr_db);

// Per-example metrics grouped by SNR bucket, with arithmetic-mean
// aggregation.
class MetricReport {
 public:
  void Add(double bucket_db, const MetricValues& values);

  std::size_t count(double bucket_db) const;
  std::size_t total_count() const;
  std::vector<double> buckets() const;
  std::optional<MetricValues> Mean(double bucket_db) const;
  std::optional<MetricValues> MeanAll() const;
  const std::vector<MetricValues>& examples(double bucket_db) const;

 private:
  std::map<double, std::vector<MetricValues>> by_bucket_;
};

// CSV rows "model,w_in,w_out,snr_bucket,metric,value".
struct ReportRow {
  std::string model;
  std::size_t w_in = 1;
  std::size_t w_out = 1;
  std::string snr_bucket;
  std::string metric;
  double value = 0.0;
};

std::string FormatReportCsv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> ParseReportCsv(const std::string& text);

// Shortest round-trip decimal form of a double.
std::string FormatDouble(double v);

}  // namespace ctxmask

#endif  // CTXMASK_METRICS_H_
