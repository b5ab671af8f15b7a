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

#include "anthro/normalize.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "anthro/corpus.h"
#include "anthro/error.h"
#include "anthro/index.h"
#include "anthro/utf8.h"

namespace anthro {
namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

// Case-preserving lookalikes that the lowercase-only fold table cannot hold.
char32_t homoglyph_supplement(char32_t cp) {
  switch (cp) {
    // Cyrillic capitals
    case U'А': return 'A';
    case U'В': return 'B';
    case U'Е': return 'E';
    case U'Ѕ': return 'S';
    case U'І': return 'I';
    case U'Ј': return 'J';
    case U'К': return 'K';
    case U'М': return 'M';
    case U'Н': return 'H';
    case U'О': return 'O';
    case U'Р': return 'P';
    case U'С': return 'C';
    case U'Т': return 'T';
    case U'У': return 'Y';
    case U'Х': return 'X';
    // Greek capitals
    case U'Α': return 'A';
    case U'Β': return 'B';
    case U'Ε': return 'E';
    case U'Ζ': return 'Z';
    case U'Η': return 'H';
    case U'Ι': return 'I';
    case U'Κ': return 'K';
    case U'Μ': return 'M';
    case U'Ν': return 'N';
    case U'Ο': return 'O';
    case U'Ρ': return 'P';
    case U'Τ': return 'T';
    case U'Υ': return 'Y';
    case U'Χ': return 'X';
    // Greek lowercase not in the fold table
    case U'ι': return 'i';
    case U'κ': return 'k';
    default:
      break;
  }
  // Fullwidth forms
  if (cp >= 0xFF21 && cp <= 0xFF3A) return 'A' + (cp - 0xFF21);
  if (cp >= 0xFF41 && cp <= 0xFF5A) return 'a' + (cp - 0xFF41);
  if (cp >= 0xFF10 && cp <= 0xFF19) return '0' + (cp - 0xFF10);
  return cp;
}

}  // namespace

std::string normalize_accents(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_combining_mark(cp)) continue;
    if (const char base = utf8::accent_base(cp); base != '\0') cp = static_cast<unsigned char>(base);
    utf8::append(out, cp);
  }
  return out;
}

std::string normalize_homoglyphs(std::string_view text, const VisualFoldTable& table) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode(text)) {
    cp = homoglyph_supplement(cp);
    if (const auto letter = table.lookup(cp)) cp = static_cast<unsigned char>(*letter);
    utf8::append(out, cp);
  }
  return out;
}

void Dictionary::add(std::string_view word, uint64_t frequency) {
  std::string lower = utf8::to_lower(word);
  auto it = by_word_.find(lower);
  if (it != by_word_.end()) {
    words_[it->second].frequency += frequency;
    return;
  }
  Entry e;
  e.folded = utf8::decode(lower);
  e.word = std::move(lower);
  e.frequency = frequency;
  const size_t id = words_.size();
  const size_t len = e.folded.size();
  by_word_.emplace(e.word, id);
  words_.push_back(std::move(e));
  if (by_length_.size() <= len) by_length_.resize(len + 1);
  by_length_[len].push_back(id);
}

Dictionary Dictionary::parse(std::istream& in) {
  Dictionary dict;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    uint64_t freq = 0;
    bool ok = tab != std::string::npos && tab > 0;
    if (ok) {
      const char* first = line.data() + tab + 1;
      const char* last = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(first, last, freq);
      ok = ec == std::errc() && ptr == last;
    }
    if (!ok) {
      throw Error(ErrorCode::kFormatError,
                  "dictionary line " + std::to_string(line_no) + ": expected <word><TAB><frequency>");
    }
    dict.add(std::string_view(line).substr(0, tab), freq);
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "error reading dictionary");
  return dict;
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return parse(in);
}

bool Dictionary::contains(std::string_view word) const {
  return by_word_.contains(utf8::to_lower(word));
}

std::optional<std::string> Dictionary::best_correction(std::string_view word,
                                                       size_t max_distance) const {
  const std::u32string folded = utf8::decode(utf8::to_lower(word));
  const size_t len = folded.size();
  const size_t lo = len > max_distance ? len - max_distance : 0;
  const size_t hi = std::min(len + max_distance, by_length_.empty() ? 0 : by_length_.size() - 1);
  const Entry* best = nullptr;
  for (size_t l = lo; l <= hi && !by_length_.empty(); ++l) {
    for (size_t id : by_length_[l]) {
      const Entry& e = words_[id];
      if (best && (e.frequency < best->frequency ||
                   (e.frequency == best->frequency && e.word > best->word))) {
        continue;
      }
      if (within_distance_ci(folded, e.folded, max_distance)) best = &e;
    }
  }
  if (!best) return std::nullopt;
  return best->word;
}

std::string correct_spelling(std::string_view text, const Dictionary& dictionary,
                             size_t max_distance) {
  if (dictionary.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dictionary");
  std::string out;
  out.reserve(text.size());
  size_t cursor = 0;
  for (const auto& span : tokenize_spans(text)) {
    out.append(text.substr(cursor, span.begin - cursor));
    const auto token = text.substr(span.begin, span.size());
    std::optional<std::string> fix;
    if (!dictionary.contains(token)) fix = dictionary.best_correction(token, max_distance);
    out += fix ? std::string_view(*fix) : token;
    cursor = span.end;
  }
  out.append(text.substr(cursor));
  return out;
}

std::vector<NormalizerStage> parse_stages(std::string_view spec) {
  std::vector<NormalizerStage> out;
  if (spec.empty() || spec == "none") return out;
  size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find_first_of(",+", start);
    if (end == std::string_view::npos) end = spec.size();
    const auto name = spec.substr(start, end - start);
    if (name == "a" || name == "A") {
      out.push_back(NormalizerStage::kAccents);
    } else if (name == "h" || name == "H") {
      out.push_back(NormalizerStage::kHomoglyphs);
    } else if (name == "p" || name == "P") {
      out.push_back(NormalizerStage::kSpelling);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown normalizer stage '" + std::string(name) + "'");
    }
    start = end + 1;
  }
  return out;
}

std::string stages_name(const std::vector<NormalizerStage>& stages) {
  if (stages.empty()) return "none";
  std::string out;
  for (auto s : stages) {
    if (!out.empty()) out += '+';
    out += s == NormalizerStage::kAccents ? 'A' : s == NormalizerStage::kHomoglyphs ? 'H' : 'P';
  }
  return out;
}

NormalizerStack::NormalizerStack(std::vector<NormalizerStage> stages,
                                 std::shared_ptr<const Dictionary> dictionary,
                                 size_t max_distance, const VisualFoldTable& table)
    : stages_(std::move(stages)),
      dictionary_(std::move(dictionary)),
      max_distance_(max_distance),
      table_(&table) {
  const bool wants_p =
      std::find(stages_.begin(), stages_.end(), NormalizerStage::kSpelling) != stages_.end();
  if (wants_p && (!dictionary_ || dictionary_->empty())) {
    throw Error(ErrorCode::kInvalidArgument, "spelling stage needs a non-empty dictionary");
  }
}

std::string NormalizerStack::apply(std::string_view text) const {
  std::string current(text);
  for (auto stage : stages_) {
    switch (stage) {
      case NormalizerStage::kAccents:
        current = normalize_accents(current);
        break;
      case NormalizerStage::kHomoglyphs:
        current = normalize_homoglyphs(current, *table_);
        break;
      case NormalizerStage::kSpelling:
        current = correct_spelling(current, *dictionary_, max_distance_);
        break;
    }
  }
  return current;
}

std::vector<Probabilities> NormalizedScorer::score(std::span<const std::string> texts) const {
  if (stack_.empty()) return inner_.score(texts);
  std::vector<std::string> normalized;
  normalized.reserve(texts.size());
  for (const auto& t : texts) normalized.push_back(stack_.apply(t));
  return inner_.score(normalized);
}

}  // namespace anthro
