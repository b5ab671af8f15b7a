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

#ifndef ANTHRO_SCORER_H_
#define ANTHRO_SCORER_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anthro {

using Probabilities = std::vector<double>;

// Black-box classifier: class-probability vectors for a batch of texts, in
// batch order. Implementations report failures as Error(kScorerFailure) or a
// transport-specific code.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::vector<Probabilities> score(std::span<const std::string> texts) const = 0;
  virtual const std::vector<std::string>& label_names() const = 0;

  Probabilities score_one(const std::string& text) const;
  size_t num_labels() const { return label_names().size(); }
};

// Index of the largest probability; the first wins ties.
size_t argmax(const Probabilities& p);

// Non-negative entries summing to 1 within `tolerance`.
bool is_distribution(const Probabilities& p, double tolerance = 1e-6);

struct Example {
  std::string text;
  size_t label = 0;
  bool operator==(const Example&) const = default;
};

class LabeledDataset {
 public:
  LabeledDataset() = default;
  explicit LabeledDataset(std::vector<std::string> labels) : labels_(std::move(labels)) {}

  // Adds `text` under `label`, registering the label if new.
  void add(std::string text, std::string_view label);
  // Throws Error(kInvalidArgument) for an undeclared label index.
  void add(std::string text, size_t label);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Example>& examples() const { return examples_; }
  size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }

  // Index of `label`, registering it if new.
  size_t label_id(std::string_view label);
  // npos when absent.
  size_t find_label(std::string_view label) const;

  // `label<TAB>text` lines. Throws Error(kFormatError) on lines without a tab.
  static LabeledDataset parse_tsv(std::istream& in);
  static LabeledDataset load_tsv(const std::filesystem::path& path);

 private:
  std::vector<std::string> labels_;
  std::vector<Example> examples_;
};

}  // namespace anthro

#endif  // ANTHRO_SCORER_H_
