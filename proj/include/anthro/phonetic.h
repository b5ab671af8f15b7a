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

#ifndef ANTHRO_PHONETIC_H_
#define ANTHRO_PHONETIC_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anthro {

// Maps visually confusable characters ('0', '@', Cyrillic 'о', ...) to the
// lowercase ASCII letter they imitate. Context free: one character in, one
// letter out.
class VisualFoldTable {
 public:
  VisualFoldTable() = default;

  // The built-in table: leetspeak digits and symbols plus the common
  // Cyrillic/Greek lowercase lookalikes.
  static const VisualFoldTable& builtin();

  // Parses `<char><TAB><ascii-letter>` lines; '#' starts a comment line.
  // Throws Error(kFormatError) on malformed lines.
  static VisualFoldTable parse(std::istream& in);
  static VisualFoldTable load(const std::filesystem::path& path);

  // Throws Error(kInvalidArgument) unless `letter` is a lowercase ASCII
  // letter and `from` is not itself an ASCII letter.
  void add(char32_t from, char letter);

  std::optional<char> lookup(char32_t cp) const {
    auto it = entries_.find(cp);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // Every confusable that folds to `letter`, in code point order.
  std::vector<char32_t> confusables_for(char letter) const;

  const std::map<char32_t, char>& entries() const { return entries_; }
  bool operator==(const VisualFoldTable&) const = default;

 private:
  std::map<char32_t, char> entries_;
};

// Strips accents, folds confusables, removes remaining non-alphanumeric
// characters and uppercases ASCII letters. Unmapped digits are kept.
std::string fold_visual(std::string_view word,
                        const VisualFoldTable& table = VisualFoldTable::builtin());

struct PhoneticCode {
  int level = 0;
  std::string code;

  // Leading letters ("DE" in "DE5263").
  std::string_view prefix() const;
  // Trailing digits ("5263" in "DE5263").
  std::string_view digits() const;

  bool operator==(const PhoneticCode&) const = default;
};

// Soundex++ digit class of an uppercase ASCII letter; 0 for the letters
// that are dropped (vowels, H, W, Y).
int consonant_class(char upper);

// Hierarchical Soundex++ code of `word` at `level`: the first level+1
// letters verbatim, the rest as collapsed consonant classes, padded to three
// digits and truncated to four.
// Throws Error(kEmptyAfterFold) when no letters survive folding and
// Error(kInvalidArgument) for a negative level.
PhoneticCode encode(std::string_view word, int level,
                    const VisualFoldTable& table = VisualFoldTable::builtin());

// As encode(), but returns nullopt for unencodable words.
std::optional<PhoneticCode> try_encode(
    std::string_view word, int level,
    const VisualFoldTable& table = VisualFoldTable::builtin());

}  // namespace anthro

#endif  // ANTHRO_PHONETIC_H_
