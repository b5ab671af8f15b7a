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

#include "anthro/corpus.h"

#include <algorithm>
#include <istream>

#include "anthro/error.h"
#include "anthro/utf8.h"

namespace anthro {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '"': case '\'': case '?':
    case '(': case ')': case '[': case ']': case '{': case '}':
      return true;
    default:
      return false;
  }
}

std::string line_source_key(uint64_t line_no) {
  // A leading NUL keeps line keys disjoint from user-supplied ids.
  std::string key(1, '\0');
  key += std::to_string(line_no);
  return key;
}

}  // namespace

bool has_letter(std::string_view token) {
  for (char c : token) {
    if (utf8::is_ascii_alpha(static_cast<unsigned char>(c))) return true;
  }
  if (std::all_of(token.begin(), token.end(),
                  [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
    return false;
  }
  const auto cps = utf8::decode(token);
  return std::any_of(cps.begin(), cps.end(), [](char32_t cp) { return utf8::is_letter(cp); });
}

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    size_t j = i;
    while (j < n && !is_space(text[j])) ++j;
    size_t b = i;
    size_t e = j;
    while (b < e && is_edge_punct(text[b])) ++b;
    while (e > b && is_edge_punct(text[e - 1])) --e;
    if (b < e && has_letter(text.substr(b, e - b))) out.push_back({b, e});
    i = j;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& span : tokenize_spans(text)) {
    out.emplace_back(text.substr(span.begin, span.size()));
  }
  return out;
}

uint32_t CorpusCounter::intern_source(std::string_view source_id) {
  auto [it, inserted] =
      source_ids_.try_emplace(std::string(source_id), static_cast<uint32_t>(source_names_.size()));
  if (inserted) source_names_.push_back(it->first);
  return it->second;
}

void CorpusCounter::count(std::string_view text, uint32_t source) {
  for (const auto& span : tokenize_spans(text)) {
    auto [it, inserted] = tallies_.try_emplace(std::string(text.substr(span.begin, span.size())));
    Tally& t = it->second;
    ++t.frequency;
    if (t.sources.empty() || t.sources.back() != source) t.sources.push_back(source);
    ++total_tokens_;
  }
}

void CorpusCounter::add(std::string_view text, std::string_view source_id) {
  count(text, intern_source(source_id));
}

void CorpusCounter::add_line(std::string_view text, uint64_t line_no) {
  count(text, intern_source(line_source_key(line_no)));
}

void CorpusCounter::merge(const CorpusCounter& other) {
  std::vector<uint32_t> remap(other.source_names_.size());
  for (size_t i = 0; i < other.source_names_.size(); ++i) {
    remap[i] = intern_source(other.source_names_[i]);
  }
  for (const auto& [token, theirs] : other.tallies_) {
    Tally& mine = tallies_[token];
    mine.frequency += theirs.frequency;
    for (uint32_t s : theirs.sources) mine.sources.push_back(remap[s]);
  }
  total_tokens_ += other.total_tokens_;
}

std::vector<TokenRecord> CorpusCounter::records() const {
  std::vector<TokenRecord> out;
  out.reserve(tallies_.size());
  std::vector<uint32_t> scratch;
  for (const auto& [token, tally] : tallies_) {
    scratch = tally.sources;
    std::sort(scratch.begin(), scratch.end());
    const auto distinct = std::unique(scratch.begin(), scratch.end()) - scratch.begin();
    out.push_back({token, tally.frequency, static_cast<uint64_t>(distinct)});
  }
  std::sort(out.begin(), out.end(),
            [](const TokenRecord& a, const TokenRecord& b) { return a.token < b.token; });
  return out;
}

void ingest_into(std::istream& in, const IngestOptions& options, CorpusCounter& counter,
                 uint64_t first_line_no) {
  std::string line;
  uint64_t line_no = first_line_no;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (options.tsv) {
      const auto tab = line.rfind('\t');
      if (tab != std::string::npos) {
        counter.add(std::string_view(line).substr(0, tab),
                    std::string_view(line).substr(tab + 1));
        ++line_no;
        continue;
      }
    }
    counter.add_line(line, line_no++);
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "error reading corpus stream");
}

std::vector<TokenRecord> ingest(std::istream& in, const IngestOptions& options) {
  CorpusCounter counter;
  ingest_into(in, options, counter);
  return counter.records();
}

}  // namespace anthro
