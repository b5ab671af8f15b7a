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

#include "anthro/phonetic.h"

#include <sstream>

#include "anthro/error.h"
#include "gtest/gtest.h"
#include "support/properties.h"

namespace anthro {
namespace {

TEST(FoldVisualTest, FoldsConfusablesAndCase) {
  EXPECT_EQ(fold_visual("p0rn"), "PORN");
  EXPECT_EQ(fold_visual("porn"), "PORN");
  EXPECT_EQ(fold_visual("l3$b!@n"), "LESBIAN");
  EXPECT_EQ(fold_visual("dеmоcrаts"), "DEMOCRATS");  // Cyrillic е, о, а
}

TEST(FoldVisualTest, DropsUnmappedSymbols) {
  EXPECT_EQ(fold_visual("sh•t"), "SHT");
  EXPECT_EQ(fold_visual("de-pres-sion"), "DEPRESSION");
  EXPECT_EQ(fold_visual("f*ck"), "FCK");
  EXPECT_EQ(fold_visual(""), "");
  EXPECT_EQ(fold_visual("••"), "");
}

TEST(FoldVisualTest, KeepsUnmappedDigitsAndStripsAccents) {
  EXPECT_EQ(fold_visual("gr8"), "GR8");
  EXPECT_EQ(fold_visual("ċlèver"), "CLEVER");
  EXPECT_EQ(fold_visual("été"), "ETE");  // combining acute
}

TEST(EncodeTest, LeetPairExamples) {
  EXPECT_EQ(encode("porn", 0).code, "P650");
  EXPECT_EQ(encode("porn", 1).code, "PO650");
  EXPECT_EQ(encode("p0rn", 0).code, "P650");
  EXPECT_EQ(encode("p0rn", 1).code, "PO650");
}

TEST(EncodeTest, TwoSentenceKeys) {
  EXPECT_EQ(encode("the", 1).code, "TH000");
  EXPECT_EQ(encode("democrats", 1).code, "DE5263");
  EXPECT_EQ(encode("demokRATs", 1).code, "DE5263");
  EXPECT_EQ(encode("are", 1).code, "AR000");
  EXPECT_EQ(encode("arre", 1).code, "AR000");
  EXPECT_EQ(encode("dirty", 1).code, "DI630");
  EXPECT_EQ(encode("dirrrty", 1).code, "DI630");
  EXPECT_EQ(encode("not", 1).code, "NO300");
}

TEST(EncodeTest, HandTracedExamples) {
  EXPECT_EQ(encode("shit", 1).code, "SH300");
  EXPECT_EQ(encode("sh•t", 1).code, "SH300");
  // 5-2-6-3-2 truncated to four digits.
  EXPECT_EQ(encode("democrats", 1).digits(), "5263");
  // Classic map, not the unexplained L245.
  EXPECT_EQ(encode("lesbian", 0).code, "L215");
  EXPECT_EQ(encode("smith", 0).code, encode("smyth", 0).code);
}

TEST(EncodeTest, ShortWordsBecomeThePrefix) {
  EXPECT_EQ(encode("a", 2).code, "A000");
  EXPECT_EQ(encode("ok", 3).code, "OK000");
  EXPECT_EQ(encode("ok", 1).code, "OK000");
  EXPECT_EQ(encode("ok", 0).code, "O200");
}

TEST(EncodeTest, VowelSeparatedConsonantsCodeSeparately) {
  // No h/w separator rule: "ashcroft" keeps s and c apart only via the vowel.
  EXPECT_EQ(encode("tattoo", 0).code, "T300");
  EXPECT_EQ(encode("tatu", 0).code, "T300");
  EXPECT_EQ(encode("tatat", 0).code, "T330");
}

TEST(EncodeTest, ReportsLevelAndSplitsCode) {
  const auto code = encode("democrats", 2);
  EXPECT_EQ(code.level, 2);
  EXPECT_EQ(code.prefix(), "DEM");
  EXPECT_EQ(code.digits(), "2632");
}

TEST(EncodeTest, UnencodableWordsThrow) {
  try {
    encode("2•6", 1);
    FAIL() << "expected EmptyAfterFold";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAfterFold);
  }
  EXPECT_FALSE(try_encode("", 0).has_value());
  EXPECT_FALSE(try_encode("日本", 0).has_value());
  // '0' folds to a letter, so leet-only tokens are encodable.
  EXPECT_EQ(encode("00", 0).code, "O000");
}

TEST(EncodeTest, NegativeLevelIsRejected) {
  EXPECT_THROW(encode("word", -1), Error);
}

TEST(VisualFoldTableTest, BuiltinTargetsAreLowercaseLetters) {
  const auto& table = VisualFoldTable::builtin();
  EXPECT_EQ(table.lookup(U'0'), 'o');
  EXPECT_EQ(table.lookup(U'@'), 'a');
  EXPECT_EQ(table.lookup(U'|'), 'l');
  EXPECT_FALSE(table.lookup(U'a').has_value());
  for (const auto& [cp, letter] : table.entries()) {
    EXPECT_GE(letter, 'a');
    EXPECT_LE(letter, 'z');
  }
  const auto for_l = table.confusables_for('l');
  EXPECT_NE(std::find(for_l.begin(), for_l.end(), U'1'), for_l.end());
  EXPECT_NE(std::find(for_l.begin(), for_l.end(), U'|'), for_l.end());
}

TEST(VisualFoldTableTest, ParsesConfigFile) {
  std::istringstream in("# leet\n8\tb\n\n¢\tc\n");
  const auto table = VisualFoldTable::parse(in);
  EXPECT_EQ(table.entries().size(), 2u);
  EXPECT_EQ(encode("8ig", 0, table).code, "B200");
  EXPECT_EQ(fold_visual("¢at", table), "CAT");
  EXPECT_EQ(fold_visual("0", table), "0");  // builtin entries not inherited
}

TEST(VisualFoldTableTest, RejectsMalformedLines) {
  for (const char* bad : {"8b\n", "8\tB\n", "88\tb\n", "x\ty\n", "8\tbb\n"}) {
    std::istringstream in(bad);
    try {
      VisualFoldTable::parse(in);
      FAIL() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormatError) << bad;
    }
  }
}

TEST(EncodeProperties, CaseInvariance) {
  const auto r = testing::check_encode_case_invariance(11, 1000);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(EncodeProperties, ConfusableInvariance) {
  const auto r = testing::check_encode_confusable_invariance(12, 1000);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(EncodeProperties, RepeatConsonantInvariance) {
  const auto r = testing::check_encode_repeat_invariance(13, 1000);
  EXPECT_TRUE(r.ok()) << r.first;
}

TEST(EncodeProperties, PrefixMonotonicityAndSuffixBounds) {
  const auto r = testing::check_encode_prefix_and_suffix(14, 1000);
  EXPECT_TRUE(r.ok()) << r.first;
}

}  // namespace
}  // namespace anthro
