// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ctxmask {
namespace {

void RequireComparable(std::span<const double> ref, std::span<const double> deg,
                       const char* what) {
  if (ref.size() != deg.size())
    throw UsageError(std::string(what) + ": signals differ in length");
  if (ref.empty()) throw UsageError(std::string(what) + ": empty signal");
}

double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double RatioDb(double signal, double residual) {
  if (residual <= 0.0) return kMetricCapDb;
  return std::min(kMetricCapDb, 10.0 * std::log10(signal / residual));
}

}  // namespace

double SnrDb(std::span<const double> ref, std::span<const double> deg) {
  RequireComparable(ref, deg, "snr");
  const double signal = Energy(ref);
  if (signal <= 0.0) throw UsageError("snr: reference has zero energy");
  double residual = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = deg[i] - ref[i];
    residual += d * d;
  }
  return RatioDb(signal, residual);
}

double SiSdrDb(std::span<const double> ref, std::span<const double> deg) {
  RequireComparable(ref, deg, "si_sdr");
  const double ref_energy = Energy(ref);
  if (ref_energy <= 0.0) throw UsageError("si_sdr: reference has zero energy");
  double dot = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) dot += ref[i] * deg[i];
  const double alpha = dot / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double proj = alpha * ref[i];
    const double err = deg[i] - proj;
    target += proj * proj;
    residual += err * err;
  }
  if (target <= 0.0) return -kMetricCapDb;
  // Residuals at rounding level count as exact reconstruction.
  if (residual <= target * 1e-20) return kMetricCapDb;
  return RatioDb(target, residual);
}

double LsdDb(const MagnitudeSpectrogram& ref, const MagnitudeSpectrogram& deg) {
  RequireSameShape(ref, deg, "lsd");
  if (ref.empty()) throw UsageError("lsd: empty spectrogram");
  double total = 0.0;
  for (std::size_t t = 0; t < ref.frames(); ++t) {
    double acc = 0.0;
    for (std::size_t f = 0; f < ref.bins(); ++f) {
      const double r = 20.0 * std::log10((deg(t, f) + kLsdEpsilon) /
                                         (ref(t, f) + kLsdEpsilon));
      acc += r * r;
    }
    total += std::sqrt(acc / static_cast<double>(ref.bins()));
  }
  return total / static_cast<double>(ref.frames());
}

double NearestSnrBucket(double snr_db) {
  double best = kSnrBuckets[0];
  for (double b : kSnrBuckets)
    if (std::abs(snr_db - b) < std::abs(snr_db - best)) best = b;
  return best;
}

void MetricReport::Add(double bucket_db, const MetricValues& values) {
  by_bucket_[bucket_db].push_back(values);
}

std::size_t MetricReport::count(double bucket_db) const {
  auto it = by_bucket_.find(bucket_db);
  return it == by_bucket_.end() ? 0 : it->second.size();
}

std::size_t MetricReport::total_count() const {
  std::size_t n = 0;
  for (const auto& [b, v] : by_bucket_) n += v.size();
  return n;
}

std::vector<double> MetricReport::buckets() const {
  std::vector<double> out;
  for (const auto& [b, v] : by_bucket_) out.push_back(b);
  return out;
}

const std::vector<MetricValues>& MetricReport::examples(double bucket_db) const {
  static const std::vector<MetricValues> kEmpty;
  auto it = by_bucket_.find(bucket_db);
  return it == by_bucket_.end() ? kEmpty : it->second;
}

namespace {
std::optional<MetricValues> MeanOf(const std::vector<const MetricValues*>& xs) {
  if (xs.empty()) return std::nullopt;
  MetricValues m;
  for (const auto* x : xs) {
    m.snr_db += x->snr_db;
    m.si_sdr_db += x->si_sdr_db;
    m.lsd_db += x->lsd_db;
  }
  const double n = static_cast<double>(xs.size());
  m.snr_db /= n;
  m.si_sdr_db /= n;
  m.lsd_db /= n;
  return m;
}
}  // namespace

std::optional<MetricValues> MetricReport::Mean(double bucket_db) const {
  std::vector<const MetricValues*> xs;
  for (const auto& v : examples(bucket_db)) xs.push_back(&v);
  return MeanOf(xs);
}

std::optional<MetricValues> MetricReport::MeanAll() const {
  std::vector<const MetricValues*> xs;
  for (const auto& [b, vs] : by_bucket_)
    for (const auto& v : vs) xs.push_back(&v);
  return MeanOf(xs);
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatReportCsv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "model,w_in,w_out,snr_bucket,metric,value\n";
  for (const auto& r : rows)
    out << r.model << ',' << r.w_in << ',' << r.w_out << ',' << r.snr_bucket
        << ',' << r.metric << ',' << FormatDouble(r.value) << '\n';
  return out.str();
}

std::vector<ReportRow> ParseReportCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ReportRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "model,w_in,w_out,snr_bucket,metric,value")
        throw DataError("report: unexpected CSV header");
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols.size() != 6) throw DataError("report: bad row: " + line);
    ReportRow r;
    r.model = cols[0];
    r.w_in = std::stoul(cols[1]);
    r.w_out = std::stoul(cols[2]);
    r.snr_bucket = cols[3];
    r.metric = cols[4];
    r.value = std::stod(cols[5]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ctxmask
