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

#ifndef ANTHRO_MODELS_H_
#define ANTHRO_MODELS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anthro/attack.h"
#include "anthro/index.h"
#include "anthro/scorer.h"

namespace anthro {

enum class FeatureKind {
  kSurface,   // tokens as written (optionally case-folded)
  kPhonetic,  // Soundex++ code of each token at a fixed level
};

struct NaiveBayesConfig {
  bool case_sensitive = false;
  double smoothing = 1.0;
};

// Multinomial naive Bayes over unigram features, computed in log space.
class NaiveBayesScorer final : public Scorer {
 public:
  std::vector<Probabilities> score(std::span<const std::string> texts) const override;
  const std::vector<std::string>& label_names() const override { return labels_; }

  // Feature sequence the model sees for `text`.
  std::vector<std::string> features(std::string_view text) const;
  bool in_vocabulary(std::string_view feature) const { return counts_.contains(std::string(feature)); }
  size_t vocabulary_size() const { return counts_.size(); }

  FeatureKind kind() const { return kind_; }
  int level() const { return level_; }
  const NaiveBayesConfig& config() const { return config_; }

  std::string to_json() const;
  // Throws Error(kFormatError) on a malformed model document.
  static NaiveBayesScorer from_json(std::string_view document);
  void save(const std::filesystem::path& path) const;
  static NaiveBayesScorer load(const std::filesystem::path& path);

 private:
  friend NaiveBayesScorer train_naive_bayes(const LabeledDataset&, FeatureKind, int,
                                            const NaiveBayesConfig&);
  void prepare();

  FeatureKind kind_ = FeatureKind::kSurface;
  int level_ = 0;
  NaiveBayesConfig config_;
  std::vector<std::string> labels_;
  std::vector<uint64_t> class_docs_;
  std::vector<uint64_t> class_tokens_;
  std::unordered_map<std::string, std::vector<uint64_t>> counts_;
  // Derived by prepare().
  std::vector<double> log_prior_;
  std::vector<double> log_denominator_;
};

// Throws Error(kDegenerateData) unless at least two labels have examples.
NaiveBayesScorer train_naive_bayes(const LabeledDataset& data, FeatureKind kind, int level,
                                   const NaiveBayesConfig& config);

NaiveBayesScorer train_bow(const LabeledDataset& data, const NaiveBayesConfig& config = {});

// Each token is replaced by its level-k code; unencodable tokens are dropped.
// The output therefore depends only on the code sequence of the text.
NaiveBayesScorer train_sound_invariant(const LabeledDataset& data, int k,
                                       const NaiveBayesConfig& config = {});

// Self-attack augmentation: attacks the examples in order and appends each
// successful perturbation under its original label until ratio * |data|
// perturbations have been added. The originals are kept.
// Self-attack augmentation. With `target_label` set only examples of that
// label are attacked and the budget is ratio times their count.
LabeledDataset augment_adversarial(const LabeledDataset& data, const PerturbationIndex& index,
                                   const Scorer& scorer, const AttackConfig& config,
                                   double ratio = 1.0,
                                   std::optional<size_t> target_label = std::nullopt);

}  // namespace anthro

#endif  // ANTHRO_MODELS_H_
