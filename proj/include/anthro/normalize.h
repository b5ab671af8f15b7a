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

#ifndef ANTHRO_NORMALIZE_H_
#define ANTHRO_NORMALIZE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anthro/phonetic.h"
#include "anthro/scorer.h"

namespace anthro {

// Drops combining marks and replaces precomposed Latin letters by their
// ASCII base. Letters without an ASCII base pass through.
std::string normalize_accents(std::string_view text);

// Replaces fold-table confusables by their letter and maps uppercase and
// fullwidth lookalikes (Cyrillic 'А', Greek 'Β', 'Ａ') to the ASCII letter of
// the same case.
std::string normalize_homoglyphs(std::string_view text,
                                 const VisualFoldTable& table = VisualFoldTable::builtin());

// Word list with frequencies for the spelling stage. Lookups are
// case-insensitive.
class Dictionary {
 public:
  void add(std::string_view word, uint64_t frequency);

  // `<word><TAB><frequency>` lines. Throws Error(kFormatError).
  static Dictionary parse(std::istream& in);
  static Dictionary load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  bool empty() const { return words_.empty(); }
  size_t size() const { return words_.size(); }

  // Highest-frequency entry within `max_distance` (ties: smallest word).
  std::optional<std::string> best_correction(std::string_view word, size_t max_distance) const;

 private:
  struct Entry {
    std::string word;  // lowercase
    std::u32string folded;
    uint64_t frequency = 0;
  };
  std::vector<Entry> words_;
  std::unordered_map<std::string, size_t> by_word_;
  // Entries bucketed by code-point length.
  std::vector<std::vector<size_t>> by_length_;
};

// Replaces every out-of-dictionary token by best_correction(); tokens with no
// correction and in-dictionary tokens are left untouched.
// Throws Error(kInvalidArgument) for an empty dictionary.
std::string correct_spelling(std::string_view text, const Dictionary& dictionary,
                             size_t max_distance = 2);

enum class NormalizerStage { kAccents, kHomoglyphs, kSpelling };

// Parses "a,h,p" style stage lists (also "none" or ""). Throws
// Error(kInvalidArgument) for unknown stages.
std::vector<NormalizerStage> parse_stages(std::string_view spec);
std::string stages_name(const std::vector<NormalizerStage>& stages);

class NormalizerStack {
 public:
  NormalizerStack() = default;
  // Throws Error(kInvalidArgument) when the spelling stage is requested
  // without a non-empty dictionary.
  NormalizerStack(std::vector<NormalizerStage> stages,
                  std::shared_ptr<const Dictionary> dictionary = nullptr,
                  size_t max_distance = 2,
                  const VisualFoldTable& table = VisualFoldTable::builtin());

  std::string apply(std::string_view text) const;
  const std::vector<NormalizerStage>& stages() const { return stages_; }
  bool empty() const { return stages_.empty(); }

 private:
  std::vector<NormalizerStage> stages_;
  std::shared_ptr<const Dictionary> dictionary_;
  size_t max_distance_ = 2;
  const VisualFoldTable* table_ = &VisualFoldTable::builtin();
};

// Scorer that normalizes every text before delegating, so an attacker
// querying it attacks the whole defended pipeline.
class NormalizedScorer final : public Scorer {
 public:
  NormalizedScorer(const Scorer& inner, NormalizerStack stack)
      : inner_(inner), stack_(std::move(stack)) {}

  std::vector<Probabilities> score(std::span<const std::string> texts) const override;
  const std::vector<std::string>& label_names() const override { return inner_.label_names(); }

 private:
  const Scorer& inner_;
  NormalizerStack stack_;
};

}  // namespace anthro

#endif  // ANTHRO_NORMALIZE_H_
