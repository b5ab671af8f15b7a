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

#include "anthro/index.h"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <sstream>

#include "anthro/error.h"
#include "anthro/utf8.h"

namespace anthro {
namespace {

constexpr std::string_view kMagic = "ANTHRO-INDEX";
constexpr std::string_view kVersion = "v1";
constexpr std::string_view kChecksumTag = "CHECKSUM";

std::u32string fold_case(std::string_view s) {
  std::u32string cps = utf8::decode(s);
  for (char32_t& cp : cps) cp = utf8::to_lower(cp);
  return cps;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t fnv1a(uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string corpus_fingerprint(std::span<const TokenRecord> records) {
  std::vector<const TokenRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const TokenRecord* a, const TokenRecord* b) {
    if (a->token != b->token) return a->token < b->token;
    if (a->frequency != b->frequency) return a->frequency < b->frequency;
    return a->sources < b->sources;
  });
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto* r : sorted) {
    h = fnv1a(h, r->token);
    h = fnv1a(h, "\t" + std::to_string(r->frequency) + "\t" + std::to_string(r->sources) + "\n");
  }
  return hex64(h);
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void format_error(const std::string& what) {
  throw Error(ErrorCode::kFormatError, what);
}

std::shared_ptr<const VisualFoldTable> share_table(const VisualFoldTable& table) {
  static const std::shared_ptr<const VisualFoldTable> kBuiltin(
      &VisualFoldTable::builtin(), [](const VisualFoldTable*) {});
  if (&table == &VisualFoldTable::builtin()) return kBuiltin;
  return std::make_shared<const VisualFoldTable>(table);
}

}  // namespace

size_t levenshtein_ci(std::string_view a, std::string_view b) {
  const std::u32string x = fold_case(a);
  const std::u32string y = fold_case(b);
  std::vector<size_t> prev(y.size() + 1);
  std::vector<size_t> cur(y.size() + 1);
  std::iota(prev.begin(), prev.end(), size_t{0});
  for (size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= y.size(); ++j) {
      const size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

bool within_distance_ci(std::u32string_view a, std::u32string_view b, size_t max_distance) {
  const size_t n = a.size();
  const size_t m = b.size();
  if ((n > m ? n - m : m - n) > max_distance) return false;
  if (a == b) return true;
  if (max_distance == 0) return false;
  // Small buffers; the bucket scan calls this in a tight loop.
  size_t stack_prev[64];
  size_t stack_cur[64];
  std::vector<size_t> heap_prev;
  std::vector<size_t> heap_cur;
  size_t* prev = stack_prev;
  size_t* cur = stack_cur;
  if (m + 1 > 64) {
    heap_prev.resize(m + 1);
    heap_cur.resize(m + 1);
    prev = heap_prev.data();
    cur = heap_cur.data();
  }
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    size_t row_min = cur[0];
    for (size_t j = 1; j <= m; ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > max_distance) return false;
    std::swap(prev, cur);
  }
  return prev[m] <= max_distance;
}

uint32_t PerturbationIndex::add_token(std::string_view surface, uint64_t frequency) {
  auto it = token_ids_.find(surface);
  if (it != token_ids_.end()) {
    tokens_[it->second].frequency += frequency;
    return it->second;
  }
  const auto id = static_cast<uint32_t>(tokens_.size());
  tokens_.push_back({std::string(surface), fold_case(surface), frequency});
  token_ids_.emplace(std::string(surface), id);
  return id;
}

void PerturbationIndex::finalize() {
  for (auto& level : levels_) {
    for (auto& [code, ids] : level) {
      std::sort(ids.begin(), ids.end(), [this](uint32_t a, uint32_t b) {
        return tokens_[a].surface < tokens_[b].surface;
      });
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
  }
}

PerturbationIndex PerturbationIndex::build(std::span<const TokenRecord> records,
                                           const BuildParams& params,
                                           const VisualFoldTable& table) {
  if (params.max_level < 0) throw Error(ErrorCode::kInvalidArgument, "negative max level");
  PerturbationIndex index;
  index.params_ = params;
  index.table_ = share_table(table);
  index.fingerprint_ = corpus_fingerprint(records);
  index.levels_.resize(static_cast<size_t>(params.max_level) + 1);

  std::vector<std::string> codes(index.levels_.size());
  for (const auto& record : records) {
    if (record.frequency < params.min_frequency || record.sources < params.min_sources) continue;
    if (record.token.find_first_of("\t\n\r") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "token contains a tab or line break");
    }
    bool encodable = true;
    for (int k = 0; k <= params.max_level && encodable; ++k) {
      auto code = try_encode(record.token, k, table);
      if (code) {
        codes[k] = std::move(code->code);
      } else {
        encodable = false;
      }
    }
    if (!encodable) continue;
    const uint32_t id = index.add_token(record.token, record.frequency);
    for (int k = 0; k <= params.max_level; ++k) {
      index.levels_[k][codes[k]].push_back(id);
    }
  }
  index.finalize();
  return index;
}

size_t PerturbationIndex::bucket_count(int level) const {
  if (level < 0 || level > max_level()) return 0;
  return levels_[level].size();
}

size_t PerturbationIndex::max_bucket_size(int level) const {
  size_t best = 0;
  if (level < 0 || level > max_level()) return best;
  for (const auto& [code, ids] : levels_[level]) best = std::max(best, ids.size());
  return best;
}

std::vector<IndexEntry> PerturbationIndex::bucket(int level, std::string_view code) const {
  std::vector<IndexEntry> out;
  if (level < 0 || level > max_level()) return out;
  auto it = levels_[level].find(code);
  if (it == levels_[level].end()) return out;
  out.reserve(it->second.size());
  for (uint32_t id : it->second) out.push_back({tokens_[id].surface, tokens_[id].frequency});
  return out;
}

std::vector<std::string> PerturbationIndex::codes(int level) const {
  std::vector<std::string> out;
  if (level < 0 || level > max_level()) return out;
  out.reserve(levels_[level].size());
  for (const auto& [code, ids] : levels_[level]) out.push_back(code);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndexEntry> PerturbationIndex::retrieve(const RetrievalQuery& query) const {
  if (query.k < 0 || query.k > max_level()) {
    throw Error(ErrorCode::kInvalidArgument,
                "level " + std::to_string(query.k) + " outside index range 0.." +
                    std::to_string(max_level()));
  }
  if (query.d < 0) throw Error(ErrorCode::kInvalidArgument, "negative edit distance");
  const auto code = try_encode(query.target, query.k, *table_);
  if (!code) {
    throw Error(ErrorCode::kEncodingFailure, "cannot encode '" + query.target + "'");
  }
  std::vector<IndexEntry> out;
  auto it = levels_[query.k].find(code->code);
  if (it == levels_[query.k].end()) return out;
  const std::u32string target = fold_case(query.target);
  for (uint32_t id : it->second) {
    const Token& t = tokens_[id];
    if (within_distance_ci(target, t.folded, static_cast<size_t>(query.d))) {
      out.push_back({t.surface, t.frequency});
    }
  }
  return out;
}

uint64_t PerturbationIndex::frequency(std::string_view token) const {
  auto it = token_ids_.find(token);
  return it == token_ids_.end() ? 0 : tokens_[it->second].frequency;
}

std::string PerturbationIndex::serialize() const {
  std::string body;
  for (int k = 0; k <= max_level(); ++k) {
    const std::string level = std::to_string(k);
    for (const auto& code : codes(k)) {
      for (uint32_t id : levels_[k].find(code)->second) {
        body += level;
        body += '\t';
        body += code;
        body += '\t';
        body += tokens_[id].surface;
        body += '\t';
        body += std::to_string(tokens_[id].frequency);
        body += '\n';
      }
    }
  }
  std::string out;
  out += kMagic;
  out += '\t';
  out += kVersion;
  out += "\tK=" + std::to_string(params_.max_level);
  out += "\tmin_freq=" + std::to_string(params_.min_frequency) +
         ",min_sources=" + std::to_string(params_.min_sources) + ",fingerprint=" + fingerprint_;
  out += '\n';
  out += kChecksumTag;
  out += '\t';
  out += crc32_hex(body);
  out += '\n';
  out += body;
  return out;
}

void PerturbationIndex::write(std::ostream& out) const {
  const std::string image = serialize();
  out.write(image.data(), static_cast<std::streamsize>(image.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "error writing index");
}

void PerturbationIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  write(out);
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "error closing " + path.string());
}

PerturbationIndex PerturbationIndex::parse(std::string_view image, const VisualFoldTable& table) {
  const auto eol1 = image.find('\n');
  if (image.empty() || eol1 == std::string_view::npos) format_error("missing header line");
  const auto header = split(image.substr(0, eol1), '\t');
  if (header.size() != 4 || header[0] != kMagic) format_error("bad magic");
  if (header[1] != kVersion) format_error("unsupported version '" + std::string(header[1]) + "'");

  PerturbationIndex index;
  index.table_ = share_table(table);
  if (header[2].substr(0, 2) != "K=" || !parse_uint(header[2].substr(2), index.params_.max_level) ||
      index.params_.max_level < 0) {
    format_error("bad K field");
  }
  bool have_freq = false, have_sources = false, have_fp = false;
  for (auto flag : split(header[3], ',')) {
    const auto eq = flag.find('=');
    if (eq == std::string_view::npos) format_error("bad build flag '" + std::string(flag) + "'");
    const auto key = flag.substr(0, eq);
    const auto value = flag.substr(eq + 1);
    if (key == "min_freq") {
      have_freq = parse_uint(value, index.params_.min_frequency);
    } else if (key == "min_sources") {
      have_sources = parse_uint(value, index.params_.min_sources);
    } else if (key == "fingerprint") {
      index.fingerprint_ = std::string(value);
      have_fp = true;
    } else {
      format_error("unknown build flag '" + std::string(key) + "'");
    }
  }
  if (!have_freq || !have_sources || !have_fp) format_error("missing build flags");

  const auto rest = image.substr(eol1 + 1);
  const auto eol2 = rest.find('\n');
  if (eol2 == std::string_view::npos) format_error("missing checksum line");
  const auto checksum = split(rest.substr(0, eol2), '\t');
  if (checksum.size() != 2 || checksum[0] != kChecksumTag || checksum[1].size() != 8) {
    format_error("bad checksum line");
  }
  const auto body = rest.substr(eol2 + 1);
  if (crc32_hex(body) != checksum[1]) {
    throw Error(ErrorCode::kChecksumMismatch,
                "expected " + std::string(checksum[1]) + ", got " + crc32_hex(body));
  }
  if (!body.empty() && body.back() != '\n') format_error("truncated final record");

  index.levels_.resize(static_cast<size_t>(index.params_.max_level) + 1);
  int prev_level = -1;
  std::string_view prev_code;
  std::string_view prev_token;
  size_t line_no = 2;
  size_t pos = 0;
  while (pos < body.size()) {
    const auto eol = body.find('\n', pos);
    const auto line = body.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto fields = split(line, '\t');
    const std::string where = "line " + std::to_string(line_no);
    int level = 0;
    uint64_t frequency = 0;
    if (fields.size() != 4) format_error(where + ": expected 4 fields");
    if (!parse_uint(fields[0], level) || level < 0 || level > index.params_.max_level) {
      format_error(where + ": bad level");
    }
    if (!parse_uint(fields[3], frequency) || frequency == 0) format_error(where + ": bad frequency");
    const auto code = fields[1];
    const auto token = fields[2];
    const bool ordered =
        level > prev_level ||
        (level == prev_level && (code > prev_code || (code == prev_code && token > prev_token)));
    if (!ordered) format_error(where + ": records out of canonical order");
    const auto expected = try_encode(token, level, table);
    if (!expected || expected->code != code) format_error(where + ": token does not match code");

    auto existing = index.token_ids_.find(token);
    uint32_t id;
    if (existing != index.token_ids_.end()) {
      id = existing->second;
      if (index.tokens_[id].frequency != frequency) {
        format_error(where + ": inconsistent frequency for '" + std::string(token) + "'");
      }
    } else {
      id = index.add_token(token, frequency);
    }
    index.levels_[level][std::string(code)].push_back(id);
    prev_level = level;
    prev_code = code;
    prev_token = token;
  }
  return index;
}

PerturbationIndex PerturbationIndex::read(std::istream& in, const VisualFoldTable& table) {
  std::string image{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "error reading index");
  return parse(image, table);
}

PerturbationIndex PerturbationIndex::load(const std::filesystem::path& path,
                                          const VisualFoldTable& table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return read(in, table);
}

bool PerturbationIndex::operator==(const PerturbationIndex& other) const {
  return params_ == other.params_ && *table_ == *other.table_ && serialize() == other.serialize();
}

PrecisionRecall precision_recall(const PerturbationIndex& index, const RetrievalQuery& query,
                                 std::span<const std::string> gold) {
  if (gold.empty()) throw Error(ErrorCode::kEmptyGold, "gold set is empty");
  std::vector<std::string> retrieved;
  for (auto& e : index.retrieve(query)) {
    if (e.token != query.target) retrieved.push_back(std::move(e.token));
  }
  std::vector<std::string> truth(gold.begin(), gold.end());
  std::sort(truth.begin(), truth.end());
  truth.erase(std::unique(truth.begin(), truth.end()), truth.end());
  size_t hits = 0;
  for (const auto& t : retrieved) {
    if (std::binary_search(truth.begin(), truth.end(), t)) ++hits;
  }
  PrecisionRecall out;
  out.precision = retrieved.empty() ? 0.0 : static_cast<double>(hits) / retrieved.size();
  out.recall = static_cast<double>(hits) / truth.size();
  return out;
}

std::string crc32_hex(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large images in chunks.
  constexpr size_t kChunk = 1u << 30;
  for (size_t off = 0; off < bytes.size(); off += kChunk) {
    const size_t len = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), static_cast<uInt>(len));
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

}  // namespace anthro
