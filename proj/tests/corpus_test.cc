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

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "support/synthetic.h"

namespace anthro {
namespace {

using Tokens = std::vector<std::string>;

TEST(TokenizeTest, SplitsOnWhitespaceAndKeepsCase) {
  EXPECT_EQ(tokenize("the demokRATs are dirrrty"),
            (Tokens{"the", "demokRATs", "are", "dirrrty"}));
  EXPECT_EQ(tokenize("  tabs\tand\nnewlines  "), (Tokens{"tabs", "and", "newlines"}));
}

TEST(TokenizeTest, StripsEdgePunctuationOnly) {
  EXPECT_EQ(tokenize("de-pres-sion."), (Tokens{"de-pres-sion"}));
  EXPECT_EQ(tokenize("\"(hello)\" world?!"), (Tokens{"hello", "world?!"}));
  EXPECT_EQ(tokenize("sh•t f*ck @ss"), (Tokens{"sh•t", "f*ck", "@ss"}));
}

TEST(TokenizeTest, DropsPiecesWithoutLetters) {
  EXPECT_EQ(tokenize("12 34"), Tokens{});
  EXPECT_EQ(tokenize("... !!! 2021 ••"), Tokens{});
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("gr8 b4"), (Tokens{"gr8", "b4"}));
  EXPECT_EQ(tokenize("café Ωmega"), (Tokens{"café", "Ωmega"}));
}

TEST(TokenizeTest, SpansPointIntoTheText) {
  const std::string text = " (idiot), you";
  const auto spans = tokenize_spans(text);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(text.substr(spans[0].begin, spans[0].size()), "idiot");
  EXPECT_EQ(text.substr(spans[1].begin, spans[1].size()), "you");
}

TEST(IngestTest, CountsTwoSentenceSentences) {
  std::istringstream in("the democrats arre not dirty\nthe demokRATs are dirrrty\n");
  const auto records = ingest(in);
  ASSERT_EQ(records.size(), 8u);
  const auto the = std::find_if(records.begin(), records.end(),
                                [](const TokenRecord& r) { return r.token == "the"; });
  ASSERT_NE(the, records.end());
  EXPECT_EQ(the->frequency, 2u);
  EXPECT_EQ(the->sources, 2u);
  EXPECT_TRUE(std::is_sorted(records.begin(), records.end(),
                             [](const auto& a, const auto& b) { return a.token < b.token; }));
}

TEST(IngestTest, EmptyStream) {
  std::istringstream in("");
  EXPECT_TRUE(ingest(in).empty());
}

TEST(IngestTest, RepeatedLinesMultiplyFrequencies) {
  std::string text;
  for (int i = 0; i < 1000; ++i) text += "you idiot you\n";
  std::istringstream plain(text);
  const auto records = ingest(plain);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0], (TokenRecord{"idiot", 1000, 1000}));
  EXPECT_EQ(records[1], (TokenRecord{"you", 2000, 1000}));

  std::string tsv;
  for (int i = 0; i < 1000; ++i) tsv += "you idiot you\tuser" + std::to_string(i % 7) + "\n";
  std::istringstream by_author(tsv);
  const auto authored = ingest(by_author, {.tsv = true});
  EXPECT_EQ(authored[0], (TokenRecord{"idiot", 1000, 7}));
  EXPECT_EQ(authored[1], (TokenRecord{"you", 2000, 7}));
}

TEST(IngestTest, TsvLinesWithoutTabFallBackToLineNumbers) {
  std::istringstream in("hello\tu1\nhello\tu1\nhello\n");
  const auto records = ingest(in, {.tsv = true});
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].frequency, 3u);
  EXPECT_EQ(records[0].sources, 2u);
}

TEST(IngestTest, RecordsSatisfyInvariants) {
  const auto lines = testing::synthetic_lines(5, 20000, 800);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  std::istringstream in(text);
  const auto records = ingest(in);
  uint64_t total = 0;
  for (const auto& r : records) {
    EXPECT_GE(r.frequency, r.sources);
    EXPECT_GE(r.sources, 1u);
    EXPECT_TRUE(has_letter(r.token));
    total += r.frequency;
  }
  uint64_t emitted = 0;
  for (const auto& l : lines) emitted += tokenize(l).size();
  EXPECT_EQ(total, emitted);
}

TEST(CorpusCounterTest, MergeMatchesSinglePass) {
  std::mt19937_64 rng(3);
  const auto lines = testing::synthetic_lines(9, 5000, 300);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t split = rng() % (lines.size() + 1);
    CorpusCounter whole, left, right;
    for (size_t i = 0; i < lines.size(); ++i) {
      const std::string source = "s" + std::to_string(rng() % 50);
      whole.add(lines[i], source);
      (i < split ? left : right).add(lines[i], source);
    }
    left.merge(right);
    EXPECT_EQ(left.records(), whole.records());
    EXPECT_EQ(left.total_tokens(), whole.total_tokens());
  }
}

TEST(CorpusCounterTest, LineNumberedShardsMerge) {
  const auto lines = testing::synthetic_lines(10, 3000, 200);
  std::string first, second;
  for (size_t i = 0; i < lines.size(); ++i) (i < 100 ? first : second) += lines[i] + "\n";
  std::istringstream a(first), b(second), all(first + second);
  CorpusCounter left, right;
  ingest_into(a, {}, left, 0);
  ingest_into(b, {}, right, 100);
  left.merge(right);
  EXPECT_EQ(left.records(), ingest(all));
}

TEST(CorpusCounterTest, ResultIndependentOfLineOrder) {
  auto lines = testing::synthetic_lines(11, 3000, 200);
  CorpusCounter forward, backward;
  for (size_t i = 0; i < lines.size(); ++i) forward.add(lines[i], "u" + std::to_string(i % 13));
  for (size_t i = lines.size(); i-- > 0;) backward.add(lines[i], "u" + std::to_string(i % 13));
  EXPECT_EQ(forward.records(), backward.records());
}

}  // namespace
}  // namespace anthro
