// Copyright 2026 The Anthro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "anthro/error.h"
#include "anthro/models.h"
#include "anthro/phonetic.h"
#include "anthro/utf8.h"
#include "json.hpp"

namespace anthro {
namespace {

constexpr std::string_view kModelFormat = "anthro-naive-bayes";
constexpr int kModelVersion = 1;

std::string_view kind_name(FeatureKind kind) {
  return kind == FeatureKind::kSurface ? "surface" : "phonetic";
}

}  // namespace

std::vector<std::string> NaiveBayesScorer::features(std::string_view text) const {
  std::vector<std::string> tokens = tokenize(text);
  if (kind_ == FeatureKind::kPhonetic) {
    std::vector<std::string> codes;
    codes.reserve(tokens.size());
    for (const auto& t : tokens) {
      if (auto code = try_encode(t, level_)) codes.push_back(std::move(code->code));
    }
    return codes;
  }
  if (!config_.case_sensitive) {
    for (auto& t : tokens) t = utf8::to_lower(t);
  }
  return tokens;
}

void NaiveBayesScorer::prepare() {
  const size_t n = labels_.size();
  const double vocab = static_cast<double>(counts_.size());
  uint64_t total_docs = 0;
  for (auto c : class_docs_) total_docs += c;
  log_prior_.assign(n, 0.0);
  log_denominator_.assign(n, 0.0);
  for (size_t c = 0; c < n; ++c) {
    log_prior_[c] = class_docs_[c] == 0
                        ? -std::numeric_limits<double>::infinity()
                        : std::log(static_cast<double>(class_docs_[c])) -
                              std::log(static_cast<double>(total_docs));
    log_denominator_[c] =
        std::log(static_cast<double>(class_tokens_[c]) + config_.smoothing * vocab);
  }
}

std::vector<Probabilities> NaiveBayesScorer::score(std::span<const std::string> texts) const {
  const size_t n = labels_.size();
  const double log_alpha = std::log(config_.smoothing);
  std::vector<Probabilities> out;
  out.reserve(texts.size());
  std::vector<double> logp(n);
  for (const auto& text : texts) {
    logp = log_prior_;
    for (const auto& f : features(text)) {
      auto it = counts_.find(f);
      for (size_t c = 0; c < n; ++c) {
        const double numer = it == counts_.end()
                                 ? log_alpha
                                 : std::log(static_cast<double>(it->second[c]) + config_.smoothing);
        logp[c] += numer - log_denominator_[c];
      }
    }
    const double top = *std::max_element(logp.begin(), logp.end());
    Probabilities p(n);
    double sum = 0.0;
    for (size_t c = 0; c < n; ++c) {
      p[c] = std::exp(logp[c] - top);
      sum += p[c];
    }
    for (double& v : p) v /= sum;
    out.push_back(std::move(p));
  }
  return out;
}

NaiveBayesScorer train_naive_bayes(const LabeledDataset& data, FeatureKind kind, int level,
                                   const NaiveBayesConfig& config) {
  if (!(config.smoothing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing must be positive");
  }
  if (kind == FeatureKind::kPhonetic && level < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative phonetic level");
  }
  NaiveBayesScorer model;
  model.kind_ = kind;
  model.level_ = kind == FeatureKind::kPhonetic ? level : 0;
  model.config_ = config;
  if (kind == FeatureKind::kPhonetic) model.config_.case_sensitive = false;
  model.labels_ = data.labels();
  const size_t n = model.labels_.size();
  model.class_docs_.assign(n, 0);
  model.class_tokens_.assign(n, 0);
  for (const auto& ex : data.examples()) {
    ++model.class_docs_[ex.label];
    for (auto& f : model.features(ex.text)) {
      auto& row = model.counts_[std::move(f)];
      if (row.empty()) row.assign(n, 0);
      ++row[ex.label];
      ++model.class_tokens_[ex.label];
    }
  }
  const auto populated = std::count_if(model.class_docs_.begin(), model.class_docs_.end(),
                                       [](uint64_t c) { return c > 0; });
  if (populated < 2) {
    throw Error(ErrorCode::kDegenerateData, "training data needs at least two labels");
  }
  model.prepare();
  return model;
}

NaiveBayesScorer train_bow(const LabeledDataset& data, const NaiveBayesConfig& config) {
  return train_naive_bayes(data, FeatureKind::kSurface, 0, config);
}

NaiveBayesScorer train_sound_invariant(const LabeledDataset& data, int k,
                                       const NaiveBayesConfig& config) {
  return train_naive_bayes(data, FeatureKind::kPhonetic, k, config);
}

std::string NaiveBayesScorer::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["features"] = kind_name(kind_);
  j["level"] = level_;
  j["case_sensitive"] = config_.case_sensitive;
  j["smoothing"] = config_.smoothing;
  j["labels"] = labels_;
  j["class_docs"] = class_docs_;
  j["class_tokens"] = class_tokens_;
  // Sorted for a canonical document.
  std::map<std::string, std::vector<uint64_t>> sorted(counts_.begin(), counts_.end());
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [feature, row] : sorted) counts[feature] = row;
  j["counts"] = std::move(counts);
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

NaiveBayesScorer NaiveBayesScorer::from_json(std::string_view document) {
  NaiveBayesScorer model;
  try {
    const auto j = nlohmann::json::parse(document);
    if (j.at("format").get<std::string>() != kModelFormat ||
        j.at("version").get<int>() != kModelVersion) {
      throw Error(ErrorCode::kFormatError, "not an anthro naive-Bayes model");
    }
    const auto features = j.at("features").get<std::string>();
    if (features == "surface") {
      model.kind_ = FeatureKind::kSurface;
    } else if (features == "phonetic") {
      model.kind_ = FeatureKind::kPhonetic;
    } else {
      throw Error(ErrorCode::kFormatError, "unknown feature kind '" + features + "'");
    }
    model.level_ = j.at("level").get<int>();
    model.config_.case_sensitive = j.at("case_sensitive").get<bool>();
    model.config_.smoothing = j.at("smoothing").get<double>();
    model.labels_ = j.at("labels").get<std::vector<std::string>>();
    model.class_docs_ = j.at("class_docs").get<std::vector<uint64_t>>();
    model.class_tokens_ = j.at("class_tokens").get<std::vector<uint64_t>>();
    const size_t n = model.labels_.size();
    if (n < 2 || model.class_docs_.size() != n || model.class_tokens_.size() != n ||
        !(model.config_.smoothing > 0.0) || model.level_ < 0) {
      throw Error(ErrorCode::kFormatError, "inconsistent model header");
    }
    for (const auto& [feature, row] : j.at("counts").items()) {
      auto counts = row.get<std::vector<uint64_t>>();
      if (counts.size() != n) throw Error(ErrorCode::kFormatError, "bad count row for " + feature);
      model.counts_.emplace(feature, std::move(counts));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("model document: ") + e.what());
  }
  model.prepare();
  return model;
}

void NaiveBayesScorer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  out << to_json() << '\n';
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "error writing " + path.string());
}

NaiveBayesScorer NaiveBayesScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace anthro
