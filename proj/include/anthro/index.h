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

#ifndef ANTHRO_INDEX_H_
#define ANTHRO_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anthro/corpus.h"
#include "anthro/phonetic.h"

namespace anthro {

// Unit-cost edit distance over case-folded code points.
size_t levenshtein_ci(std::string_view a, std::string_view b);

// levenshtein_ci(a, b) <= max_distance, with early exit.
bool within_distance_ci(std::u32string_view a, std::u32string_view b, size_t max_distance);

struct BuildParams {
  int max_level = 2;
  uint64_t min_frequency = 1;
  uint64_t min_sources = 1;
  bool operator==(const BuildParams&) const = default;
};

struct IndexEntry {
  std::string token;
  uint64_t frequency = 0;
  bool operator==(const IndexEntry&) const = default;
};

struct RetrievalQuery {
  std::string target;
  int k = 1;
  int d = 1;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// Level-indexed map from phonetic code to the corpus tokens sharing that code.
// Immutable once built or loaded; concurrent readers need no locking.
class PerturbationIndex {
 public:
  // Tokens below the frequency/source thresholds and tokens with no letters
  // left after folding are skipped.
  static PerturbationIndex build(std::span<const TokenRecord> records, const BuildParams& params,
                                 const VisualFoldTable& table = VisualFoldTable::builtin());

  int max_level() const { return params_.max_level; }
  const BuildParams& params() const { return params_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const VisualFoldTable& fold_table() const { return *table_; }

  size_t token_count() const { return tokens_.size(); }
  size_t bucket_count(int level) const;
  // Largest bucket at `level`; bounds the per-query scan.
  size_t max_bucket_size(int level) const;

  // Entries of bucket `code` at `level`, sorted by token; empty if absent.
  std::vector<IndexEntry> bucket(int level, std::string_view code) const;

  // Bucket codes at `level`, sorted.
  std::vector<std::string> codes(int level) const;

  // Every token in target's level-k bucket within case-insensitive distance
  // d of the target, sorted by token. Includes the target itself when it
  // occurs in the corpus.
  // Throws Error(kInvalidArgument) for k outside [0, max_level] or d < 0 and
  // Error(kEncodingFailure) when the target cannot be encoded.
  std::vector<IndexEntry> retrieve(const RetrievalQuery& query) const;

  // Frequency of an exact surface token, 0 when absent.
  uint64_t frequency(std::string_view token) const;

  // Canonical file image.
  std::string serialize() const;
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;

  // Throws Error(kFormatError) or Error(kChecksumMismatch).
  static PerturbationIndex parse(std::string_view image,
                                 const VisualFoldTable& table = VisualFoldTable::builtin());
  static PerturbationIndex read(std::istream& in,
                                const VisualFoldTable& table = VisualFoldTable::builtin());
  // Throws Error(kIoFailure) when the file cannot be read.
  static PerturbationIndex load(const std::filesystem::path& path,
                                const VisualFoldTable& table = VisualFoldTable::builtin());

  bool operator==(const PerturbationIndex& other) const;

 private:
  struct Token {
    std::string surface;
    std::u32string folded;
    uint64_t frequency = 0;
  };
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  using Level = std::unordered_map<std::string, std::vector<uint32_t>, StringHash, std::equal_to<>>;

  uint32_t add_token(std::string_view surface, uint64_t frequency);
  void finalize();

  BuildParams params_;
  std::string fingerprint_;
  std::shared_ptr<const VisualFoldTable> table_;
  std::vector<Token> tokens_;
  std::unordered_map<std::string, uint32_t, StringHash, std::equal_to<>> token_ids_;
  std::vector<Level> levels_;
};

// Retrieval quality against a gold set of true perturbations of the target.
// The target itself is excluded from the retrieved set. Precision is 0 when
// nothing else is retrieved. Throws Error(kEmptyGold) for an empty gold set.
PrecisionRecall precision_recall(const PerturbationIndex& index, const RetrievalQuery& query,
                                 std::span<const std::string> gold);

// Hex CRC-32 (zlib polynomial) of `bytes`, 8 lowercase digits.
std::string crc32_hex(std::string_view bytes);

}  // namespace anthro

#endif  // ANTHRO_INDEX_H_
