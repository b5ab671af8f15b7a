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

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "anthro/error.h"
#include "gtest/gtest.h"
#include "support/oracles.h"
#include "support/properties.h"
#include "support/synthetic.h"

namespace anthro {
namespace {

using TokenSet = std::set<std::string>;

TokenSet tokens_of(const std::vector<IndexEntry>& entries) {
  TokenSet out;
  for (const auto& e : entries) out.insert(e.token);
  return out;
}

PerturbationIndex two_sentence_index(int k = 1) {
  std::istringstream in("the democrats arre not dirty\nthe demokRATs are dirrrty\n");
  const auto records = ingest(in);
  return PerturbationIndex::build(records, {.max_level = k});
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(LevenshteinTest, Examples) {
  EXPECT_EQ(levenshtein_ci("democrats", "demokRATs"), 1u);
  EXPECT_EQ(levenshtein_ci("dirty", "dirrrty"), 2u);
  EXPECT_EQ(levenshtein_ci("abc", "abc"), 0u);
  EXPECT_EQ(levenshtein_ci("dumb", "dub"), 1u);
  EXPECT_EQ(levenshtein_ci("", "abc"), 3u);
  EXPECT_EQ(levenshtein_ci("ÉTÉ", "été"), 0u);
  EXPECT_EQ(levenshtein_ci("kitten", "sitting"), 3u);
}

TEST(LevenshteinTest, MatchesOracleAndBandedCheck) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const auto a = testing::random_word(rng, 0, 12);
    const auto b = (i % 2) ? testing::random_variant(rng, a.empty() ? "x" : a)
                           : testing::random_word(rng, 0, 12);
    const size_t expected = testing::oracle_levenshtein(a, b);
    ASSERT_EQ(levenshtein_ci(a, b), expected) << a << " / " << b;
    std::u32string ua, ub;
    for (char c : a) ua.push_back(static_cast<char32_t>(std::tolower(static_cast<unsigned char>(c))));
    for (char c : b) ub.push_back(static_cast<char32_t>(std::tolower(static_cast<unsigned char>(c))));
    for (size_t d = 0; d <= 4; ++d) {
      ASSERT_EQ(within_distance_ci(ua, ub, d), expected <= d) << a << " / " << b << " d=" << d;
    }
  }
}

TEST(BuildTest, TwoSentenceBuckets) {
  const auto index = two_sentence_index();
  using Buckets = std::map<std::string, TokenSet>;
  Buckets actual;
  for (const auto& code : index.codes(1)) actual[code] = tokens_of(index.bucket(1, code));
  const Buckets expected = {{"TH000", {"the"}},
                            {"DE5263", {"democrats", "demokRATs"}},
                            {"AR000", {"are", "arre"}},
                            {"DI630", {"dirty", "dirrrty"}},
                            {"NO300", {"not"}}};
  EXPECT_EQ(actual, expected);
  EXPECT_EQ(index.max_level(), 1);
  EXPECT_EQ(index.token_count(), 8u);
  EXPECT_EQ(index.frequency("the"), 2u);
  EXPECT_EQ(index.frequency("The"), 0u);
}

TEST(BuildTest, EmptyCorpus) {
  const auto index = PerturbationIndex::build({}, {.max_level = 3});
  for (int k = 0; k <= 3; ++k) {
    EXPECT_EQ(index.bucket_count(k), 0u);
    EXPECT_TRUE(index.codes(k).empty());
  }
  EXPECT_TRUE(index.retrieve({"anything", 1, 2}).empty());
}

TEST(BuildTest, FiltersAndSkipsUnencodable) {
  const std::vector<TokenRecord> records = {
      {"rare", 1, 1}, {"common", 80, 60}, {"spammed", 500, 2}, {"•••", 100, 100}};
  const auto index =
      PerturbationIndex::build(records, {.max_level = 1, .min_frequency = 2, .min_sources = 50});
  EXPECT_EQ(index.token_count(), 1u);
  EXPECT_EQ(index.frequency("common"), 80u);
  EXPECT_EQ(index.frequency("rare"), 0u);
  EXPECT_EQ(index.frequency("spammed"), 0u);
}

TEST(BuildTest, BucketsMatchGroupByOracle) {
  const auto records = testing::synthetic_records(31, 10000);
  const auto index = PerturbationIndex::build(records, {.max_level = 2});
  for (int k = 0; k <= 2; ++k) {
    const auto expected = testing::oracle_buckets(records, k);
    std::map<std::string, TokenSet> actual;
    for (const auto& code : index.codes(k)) actual[code] = tokens_of(index.bucket(k, code));
    EXPECT_EQ(actual, expected) << "level " << k;
  }
}

TEST(BuildTest, RejectsTokensThatBreakTheFileFormat) {
  const std::vector<TokenRecord> records = {{"a\tb", 1, 1}};
  EXPECT_EQ(code_of([&] { PerturbationIndex::build(records, {}); }), ErrorCode::kInvalidArgument);
}

TEST(RetrieveTest, TwoSentenceQueries) {
  const auto index = two_sentence_index();
  EXPECT_EQ(tokens_of(index.retrieve({"democrats", 1, 1})), (TokenSet{"democrats", "demokRATs"}));
  EXPECT_EQ(tokens_of(index.retrieve({"dirty", 1, 2})), (TokenSet{"dirty", "dirrrty"}));
  EXPECT_EQ(tokens_of(index.retrieve({"dirty", 1, 0})), (TokenSet{"dirty"}));
  EXPECT_EQ(tokens_of(index.retrieve({"dirty", 1, 1})), (TokenSet{"dirty"}));
  EXPECT_TRUE(index.retrieve({"zebra", 1, 3}).empty());
}

TEST(RetrieveTest, EntriesCarryFrequenciesSortedByToken) {
  const auto index = two_sentence_index();
  const auto hits = index.retrieve({"DEMOCRATS", 1, 1});
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0], (IndexEntry{"democrats", 1}));
  EXPECT_EQ(hits[1], (IndexEntry{"demokRATs", 1}));
}

TEST(RetrieveTest, Errors) {
  const auto index = two_sentence_index();
  EXPECT_EQ(code_of([&] { index.retrieve({"dirty", 2, 1}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { index.retrieve({"dirty", -1, 1}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { index.retrieve({"dirty", 1, -1}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { index.retrieve({"••", 1, 1}); }), ErrorCode::kEncodingFailure);
}

TEST(RetrieveTest, MatchesLinearScan) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto records = testing::synthetic_records(100 + seed, 3000);
    const auto index = PerturbationIndex::build(records, {.max_level = 2});
    std::mt19937_64 rng(seed);
    for (int q = 0; q < 100; ++q) {
      const std::string target = (q % 3 == 0) ? testing::random_word(rng)
                                              : records[rng() % records.size()].token;
      if (!try_encode(target, 0)) continue;
      const int k = static_cast<int>(rng() % 3), d = static_cast<int>(rng() % 3);
      ASSERT_EQ(tokens_of(index.retrieve({target, k, d})),
                testing::oracle_retrieve(records, target, k, d))
          << target << " k=" << k << " d=" << d;
    }
  }
}

TEST(RetrieveProperties, MonotoneInD) {
  const auto r = testing::check_retrieval_monotone_in_d(41, 5, 100);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(RetrieveProperties, AntiMonotoneInK) {
  const auto r = testing::check_retrieval_antimonotone_in_k(42, 5, 100);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(RetrieveProperties, BucketSoundness) {
  const auto r = testing::check_bucket_soundness(43, 3);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(PersistenceTest, TwoSentenceRoundTrip) {
  const auto index = two_sentence_index();
  const auto path = std::filesystem::temp_directory_path() / "anthro_index_test.idx";
  index.save(path);
  const auto loaded = PerturbationIndex::load(path);
  std::filesystem::remove(path);
  EXPECT_TRUE(loaded == index);
  EXPECT_EQ(loaded.fingerprint(), index.fingerprint());
  EXPECT_EQ(loaded.params(), index.params());
  EXPECT_EQ(tokens_of(loaded.retrieve({"democrats", 1, 1})), (TokenSet{"democrats", "demokRATs"}));
  EXPECT_EQ(tokens_of(loaded.retrieve({"dirty", 1, 2})), (TokenSet{"dirty", "dirrrty"}));
}

TEST(PersistenceTest, FileLayout) {
  const std::string image = two_sentence_index().serialize();
  std::istringstream in(image);
  std::string header, checksum, first;
  std::getline(in, header);
  std::getline(in, checksum);
  std::getline(in, first);
  EXPECT_EQ(header.rfind("ANTHRO-INDEX\tv1\tK=1\tmin_freq=1,min_sources=1,fingerprint=", 0), 0u);
  const size_t body_start = header.size() + checksum.size() + 2;
  EXPECT_EQ(checksum, "CHECKSUM\t" + crc32_hex(std::string_view(image).substr(body_start)));
  EXPECT_EQ(first, "0\tA600\tare\t1");
  EXPECT_EQ(image.back(), '\n');
}

TEST(PersistenceTest, LargeIndexReserializesByteIdentically) {
  const auto records = testing::synthetic_records(77, 100000);
  const auto index = PerturbationIndex::build(records, {.max_level = 2});
  const std::string image = index.serialize();
  const auto parsed = PerturbationIndex::parse(image);
  EXPECT_EQ(parsed.serialize(), image);
  EXPECT_EQ(parsed.token_count(), index.token_count());
}

TEST(PersistenceTest, RoundTripProperty) {
  const auto r = testing::check_index_round_trip(44, 5, 2000);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(PersistenceTest, RejectsEmptyAndForeignFiles) {
  EXPECT_EQ(code_of([] { PerturbationIndex::parse(""); }), ErrorCode::kFormatError);
  EXPECT_EQ(code_of([] { PerturbationIndex::parse("hello\nworld\n"); }), ErrorCode::kFormatError);
  std::string image = two_sentence_index().serialize();
  image.replace(image.find("v1"), 2, "v9");
  EXPECT_EQ(code_of([&] { PerturbationIndex::parse(image); }), ErrorCode::kFormatError);
}

TEST(PersistenceTest, DetectsCorruption) {
  std::string image = two_sentence_index().serialize();
  const size_t pos = image.rfind("dirrrty");
  image[pos] = 'D';
  EXPECT_EQ(code_of([&] { PerturbationIndex::parse(image); }), ErrorCode::kChecksumMismatch);
}

TEST(PersistenceTest, RejectsMisfiledRecordsEvenWithValidChecksum) {
  const std::string header = "ANTHRO-INDEX\tv1\tK=0\tmin_freq=1,min_sources=1,fingerprint=0000000000000000\n";
  const std::string body = "0\tX000\tthe\t1\n";
  const std::string image = header + "CHECKSUM\t" + crc32_hex(body) + "\n" + body;
  EXPECT_EQ(code_of([&] { PerturbationIndex::parse(image); }), ErrorCode::kFormatError);
}

TEST(PersistenceTest, MissingFileIsIoFailure) {
  EXPECT_EQ(code_of([] { PerturbationIndex::load("/nonexistent/dir/file.idx"); }),
            ErrorCode::kIoFailure);
}

TEST(PrecisionRecallTest, Examples) {
  const auto index = two_sentence_index();
  const std::vector<std::string> gold = {"demokRATs"};
  const auto pr = precision_recall(index, {"democrats", 1, 1}, gold);
  EXPECT_DOUBLE_EQ(pr.precision, 1.0);
  EXPECT_DOUBLE_EQ(pr.recall, 1.0);
  EXPECT_EQ(code_of([&] { precision_recall(index, {"democrats", 1, 1}, {}); }),
            ErrorCode::kEmptyGold);
}

TEST(PrecisionRecallTest, SetArithmetic) {
  const std::vector<TokenRecord> records = {{"idiot", 9, 9}, {"idi0t", 3, 3}, {"idiiot", 2, 2},
                                            {"idiots", 1, 1}, {"idot", 1, 1}};
  const auto index = PerturbationIndex::build(records, {.max_level = 1});
  // Retrieved excluding the target: idi0t, idiiot, idot.
  ASSERT_EQ(tokens_of(index.retrieve({"idiot", 1, 1})),
            (TokenSet{"idi0t", "idiiot", "idiot", "idot"}));
  const std::vector<std::string> superset = {"idi0t", "idiiot", "idot", "idiots", "idyot"};
  auto pr = precision_recall(index, {"idiot", 1, 1}, superset);
  EXPECT_DOUBLE_EQ(pr.precision, 1.0);
  EXPECT_DOUBLE_EQ(pr.recall, 3.0 / 5.0);
  const std::vector<std::string> subset = {"idi0t"};
  pr = precision_recall(index, {"idiot", 1, 1}, subset);
  EXPECT_DOUBLE_EQ(pr.precision, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(pr.recall, 1.0);
  const std::vector<std::string> disjoint = {"moron"};
  pr = precision_recall(index, {"idiot", 1, 0}, disjoint);
  EXPECT_DOUBLE_EQ(pr.precision, 0.0);
  EXPECT_DOUBLE_EQ(pr.recall, 0.0);
}

}  // namespace
}  // namespace anthro
