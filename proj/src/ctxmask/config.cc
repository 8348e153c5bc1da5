// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ctxmask/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ctxmask/errors.h"
#include "ctxmask/metrics.h"

namespace ctxmask {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t ParseUint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw UsageError("config: " + key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

std::size_t ParseSize(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(ParseUint(key, v));
}

double ParseReal(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw UsageError("config: " + key + ": expected a number, got '" + v + "'");
  return out;
}

std::vector<std::size_t> ParseSizeList(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseSize(key, Trim(item)));
  if (out.empty()) throw UsageError("config: " + key + ": empty list");
  return out;
}

std::string JoinSizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

void RunConfig::Set(const std::string& dotted_key, const std::string& raw) {
  const std::string& k = dotted_key;
  const std::string v = Trim(raw);
  if (k == "stft.frame_len") stft.frame_len = ParseSize(k, v);
  else if (k == "stft.hop_len") stft.hop_len = ParseSize(k, v);
  else if (k == "stft.window") stft.window = ParseWindowKind(v);
  else if (k == "stft.sample_rate") sample_rate_hz = static_cast<int>(ParseUint(k, v));
  else if (k == "model.architecture") architecture = nn::ParseArchitecture(v);
  else if (k == "model.encoder_channels") model.channels = ParseSizeList(k, v);
  else if (k == "model.kernel") model.kernel = ParseSize(k, v);
  else if (k == "model.stride") model.stride = ParseSize(k, v);
  else if (k == "model.lstm_units") model.lstm_units = ParseSize(k, v);
  else if (k == "context.w_in") w_in = ParseSize(k, v);
  else if (k == "context.w_out") w_out = ParseSize(k, v);
  else if (k == "train.learning_rate") train.learning_rate = ParseReal(k, v);
  else if (k == "train.lr_schedule") train.lr_schedule = nn::ParseLrSchedule(v);
  else if (k == "train.batch_size") train.batch_size = ParseSize(k, v);
  else if (k == "train.epochs") train.epochs = ParseSize(k, v);
  else if (k == "train.seed") train.seed = ParseUint(k, v);
  else if (k == "train.crop_windows") train.crop_windows = ParseSize(k, v);
  else if (k == "train.crops_per_example") train.crops_per_example = ParseSize(k, v);
  else if (k == "train.adam_beta1") train.adam_beta1 = ParseReal(k, v);
  else if (k == "train.adam_beta2") train.adam_beta2 = ParseReal(k, v);
  else if (k == "train.adam_epsilon") train.adam_epsilon = ParseReal(k, v);
  else if (k == "train.loss_compression") train.loss_compression = ParseReal(k, v);
  else if (k == "data.snr_min_db") data.snr_min_db = ParseReal(k, v);
  else if (k == "data.snr_max_db") data.snr_max_db = ParseReal(k, v);
  else if (k == "data.gain_range_db") data.gain_range_db = ParseReal(k, v);
  else if (k == "data.fade_min_s") data.fade_min_s = ParseReal(k, v);
  else if (k == "data.fade_max_s") data.fade_max_s = ParseReal(k, v);
  else if (k == "eval.beta") beta = ParseReal(k, v);
  else throw UsageError("config: unknown key '" + k + "'");
}

RunConfig RunConfig::Parse(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw UsageError("config line " + std::to_string(lineno) + ": bad section header");
      section = Trim(line.substr(1, line.size() - 2));
      if (section != "stft" && section != "model" && section != "context" &&
          section != "train" && section != "data" && section != "eval")
        throw UsageError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected 'key = value' inside a section");
    cfg.Set(section + "." + Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  cfg.Validate();
  return cfg;
}

RunConfig RunConfig::Load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return Parse(ss.str());
}

std::string RunConfig::ToText() const {
  std::ostringstream o;
  o << "[stft]\n"
    << "frame_len = " << stft.frame_len << "\n"
    << "hop_len = " << stft.hop_len << "\n"
    << "window = " << ToString(stft.window) << "\n"
    << "sample_rate = " << sample_rate_hz << "\n\n"
    << "[model]\n"
    << "architecture = " << nn::ToString(architecture) << "\n"
    << "encoder_channels = " << JoinSizes(model.channels) << "\n"
    << "kernel = " << model.kernel << "\n"
    << "stride = " << model.stride << "\n"
    << "lstm_units = " << model.lstm_units << "\n\n"
    << "[context]\n"
    << "w_in = " << w_in << "\n"
    << "w_out = " << w_out << "\n\n"
    << "[train]\n"
    << "learning_rate = " << FormatDouble(train.learning_rate) << "\n"
    << "lr_schedule = " << nn::ToString(train.lr_schedule) << "\n"
    << "batch_size = " << train.batch_size << "\n"
    << "epochs = " << train.epochs << "\n"
    << "seed = " << train.seed << "\n"
    << "crop_windows = " << train.crop_windows << "\n"
    << "crops_per_example = " << train.crops_per_example << "\n"
    << "adam_beta1 = " << FormatDouble(train.adam_beta1) << "\n"
    << "adam_beta2 = " << FormatDouble(train.adam_beta2) << "\n"
    << "adam_epsilon = " << FormatDouble(train.adam_epsilon) << "\n"
    << "loss_compression = " << FormatDouble(train.loss_compression) << "\n\n"
    << "[data]\n"
    << "snr_min_db = " << FormatDouble(data.snr_min_db) << "\n"
    << "snr_max_db = " << FormatDouble(data.snr_max_db) << "\n"
    << "gain_range_db = " << FormatDouble(data.gain_range_db) << "\n"
    << "fade_min_s = " << FormatDouble(data.fade_min_s) << "\n"
    << "fade_max_s = " << FormatDouble(data.fade_max_s) << "\n\n"
    << "[eval]\n"
    << "beta = " << FormatDouble(beta) << "\n";
  return o.str();
}

nn::ModelConfig RunConfig::model_config() const {
  return nn::MakeReferenceConfig(architecture, context(), stft.bins(), model);
}

void RunConfig::Validate() const {
  stft.Validate();
  if (sample_rate_hz != kSampleRateHz)
    throw UsageError("config: only 16000 Hz audio is supported");
  (void)context();
  train.Validate();
  data.Validate();
  if (!(beta > 0.0 && beta <= 1.0))
    throw UsageError("config: eval.beta must lie in (0, 1]");
  model_config().Validate();
}

}  // namespace ctxmask
