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

#ifndef ANTHRO_CORPUS_H_
#define ANTHRO_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace anthro {

// Byte range [begin, end) of a token inside the text it was cut from.
struct TokenSpan {
  size_t begin = 0;
  size_t end = 0;
  size_t size() const { return end - begin; }
  bool operator==(const TokenSpan&) const = default;
};

// Whitespace split with edge punctuation (.,;:"'?()[]{}) trimmed. Internal
// symbols, digits and emoji are kept; pieces without a letter are dropped.
std::vector<TokenSpan> tokenize_spans(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

bool has_letter(std::string_view token);

struct TokenRecord {
  std::string token;
  uint64_t frequency = 0;
  uint64_t sources = 0;
  bool operator==(const TokenRecord&) const = default;
};

// Case-sensitive token tallies with distinct-source counts. Counters built
// over disjoint shards merge into the same result as a single pass.
class CorpusCounter {
 public:
  void add(std::string_view text, std::string_view source_id);
  // Source is the line number; `line_no` must be unique across a stream.
  void add_line(std::string_view text, uint64_t line_no);

  void merge(const CorpusCounter& other);

  // Sorted by token.
  std::vector<TokenRecord> records() const;
  uint64_t total_tokens() const { return total_tokens_; }
  size_t distinct_tokens() const { return tallies_.size(); }

 private:
  struct Tally {
    uint64_t frequency = 0;
    std::vector<uint32_t> sources;  // appended unsorted; deduplicated on read
  };

  uint32_t intern_source(std::string_view source_id);
  void count(std::string_view text, uint32_t source);

  std::unordered_map<std::string, uint32_t> source_ids_;
  std::vector<std::string> source_names_;
  std::unordered_map<std::string, Tally> tallies_;
  uint64_t total_tokens_ = 0;
};

struct IngestOptions {
  // `text<TAB>source-id` lines; a line without a tab falls back to its line
  // number as source.
  bool tsv = false;
};

// Throws Error(kIoFailure) if the stream goes bad.
std::vector<TokenRecord> ingest(std::istream& in, const IngestOptions& options = {});
void ingest_into(std::istream& in, const IngestOptions& options, CorpusCounter& counter,
                 uint64_t first_line_no = 0);

}  // namespace anthro

#endif  // ANTHRO_CORPUS_H_
