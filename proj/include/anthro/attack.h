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

#ifndef ANTHRO_ATTACK_H_
#define ANTHRO_ATTACK_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anthro/corpus.h"
#include "anthro/index.h"
#include "anthro/scorer.h"

namespace anthro {

enum class AttackMode {
  kAnthro,  // corpus-mined perturbations from the index
  kBugs,    // deductive character edits
  kBeta,    // union of both
};

std::string_view to_string(AttackMode mode);
std::optional<AttackMode> parse_attack_mode(std::string_view name);

// Character-edit classes for the bugs generator, combinable as a mask.
namespace bug_class {
inline constexpr unsigned kSpace = 1u << 0;
inline constexpr unsigned kDelete = 1u << 1;
inline constexpr unsigned kSwap = 1u << 2;
inline constexpr unsigned kConfusable = 1u << 3;
inline constexpr unsigned kAll = kSpace | kDelete | kSwap | kConfusable;
}  // namespace bug_class

inline constexpr size_t kUnlimited = std::numeric_limits<size_t>::max();

struct AttackConfig {
  AttackMode mode = AttackMode::kAnthro;
  int k = 1;
  int d = 1;
  size_t max_candidates_per_word = kUnlimited;
  size_t max_words_perturbed = kUnlimited;
  unsigned bug_classes = bug_class::kAll;
};

// Throws Error(kInvalidArgument) when a field is out of range.
void validate(const AttackConfig& config);

struct Edit {
  size_t position = 0;  // word index within the sentence
  std::string original;
  std::string replacement;
  bool operator==(const Edit&) const = default;
};

struct AttackOutcome {
  std::string original;
  std::optional<std::string> perturbed;
  std::vector<Edit> edits;
  size_t queries_used = 0;
  double original_probability = 0.0;
  double final_probability = 0.0;
  bool success = false;
  bool operator==(const AttackOutcome&) const = default;
};

// One JSON object, no trailing newline.
std::string to_json_line(const AttackOutcome& outcome);

struct WordImportance {
  size_t position = 0;
  double importance = 0.0;
};

// A text cut into tokenizer words; bytes between words are preserved so that
// rendering reproduces untouched words exactly.
class Sentence {
 public:
  explicit Sentence(std::string text);

  size_t size() const { return words_.size(); }
  const std::string& word(size_t i) const { return words_[i]; }
  std::string_view original_word(size_t i) const;

  void replace(size_t i, std::string word) { words_[i] = std::move(word); }

  std::string render() const;
  // Rendering with word i swapped for `word` (empty deletes it).
  std::string render_with(size_t i, std::string_view word) const;

 private:
  std::string text_;
  std::vector<TokenSpan> spans_;
  std::vector<std::string> words_;
};

// Deletion importance: P(label | x) - P(label | x without word i), in word
// order. Uses one batch of size(words) + 1 queries.
std::vector<WordImportance> score_words(const Scorer& scorer, std::string_view text,
                                        size_t true_label);

// Exhaustive single-edit bugs of `word` over the classes in `classes`:
// interior space insertions, deletions, adjacent swaps, and substitutions of
// a lowercase letter by one of its confusables. Sorted, deduplicated, and
// never containing `word` itself or the empty string.
std::vector<std::string> bug_candidates(std::string_view word, unsigned classes,
                                        const VisualFoldTable& table = VisualFoldTable::builtin());

// Replacement candidates for `word` in attack order: indexed tokens by
// descending corpus frequency (ties by token), then bugs by token; truncated
// to config.max_candidates_per_word. Never contains `word`.
std::vector<std::string> candidates(std::string_view word, const AttackConfig& config,
                                    const PerturbationIndex& index);

// Greedy black-box attack. Words are visited by descending importance; at
// each word the candidate giving the lowest true-label probability is kept if
// it lowers that probability; the attack stops once the argmax label moves.
// Throws Error(kNotCorrectlyPredicted) when the scorer already mislabels
// `text`.
AttackOutcome attack(const Scorer& scorer, std::string_view text, size_t true_label,
                     const AttackConfig& config, const PerturbationIndex& index);

// As attack(), but returns nullopt instead of throwing for a mispredicted text.
std::optional<AttackOutcome> attack_if_correct(const Scorer& scorer, std::string_view text,
                                               size_t true_label, const AttackConfig& config,
                                               const PerturbationIndex& index);

}  // namespace anthro

#endif  // ANTHRO_ATTACK_H_
