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

#include <fstream>
#include <istream>

#include "anthro/error.h"
#include "anthro/utf8.h"

namespace anthro {
namespace {

VisualFoldTable make_builtin() {
  VisualFoldTable t;
  t.add(U'0', 'o');
  t.add(U'1', 'l');
  t.add(U'3', 'e');
  t.add(U'4', 'a');
  t.add(U'5', 's');
  t.add(U'7', 't');
  t.add(U'@', 'a');
  t.add(U'$', 's');
  t.add(U'!', 'i');
  t.add(U'|', 'l');
  t.add(U'€', 'e');
  // Cyrillic
  t.add(U'а', 'a');
  t.add(U'е', 'e');
  t.add(U'о', 'o');
  t.add(U'р', 'p');
  t.add(U'с', 'c');
  t.add(U'у', 'y');
  t.add(U'х', 'x');
  t.add(U'і', 'i');
  t.add(U'ј', 'j');
  t.add(U'ѕ', 's');
  // Greek
  t.add(U'ο', 'o');
  t.add(U'α', 'a');
  t.add(U'ν', 'v');
  return t;
}

constexpr std::string_view kWhitespace = " \t\r";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(kWhitespace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kWhitespace);
  return s.substr(b, e - b + 1);
}

}  // namespace

const VisualFoldTable& VisualFoldTable::builtin() {
  static const VisualFoldTable table = make_builtin();
  return table;
}

void VisualFoldTable::add(char32_t from, char letter) {
  if (letter < 'a' || letter > 'z') {
    throw Error(ErrorCode::kInvalidArgument,
                "fold target must be a lowercase ASCII letter");
  }
  if (utf8::is_ascii_alpha(from)) {
    throw Error(ErrorCode::kInvalidArgument, "ASCII letters cannot be folded");
  }
  entries_[from] = letter;
}

VisualFoldTable VisualFoldTable::parse(std::istream& in) {
  VisualFoldTable t;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    const std::u32string from =
        tab == std::string::npos ? std::u32string{} : utf8::decode(line.substr(0, tab));
    const std::string_view to =
        tab == std::string::npos ? std::string_view{} : trim(std::string_view(line).substr(tab + 1));
    if (from.size() != 1 || to.size() != 1) {
      throw Error(ErrorCode::kFormatError,
                  "fold table line " + std::to_string(line_no) +
                      ": expected <char><TAB><ascii-letter>");
    }
    try {
      t.add(from.front(), to.front());
    } catch (const Error& e) {
      throw Error(ErrorCode::kFormatError,
                  "fold table line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "reading fold table");
  return t;
}

VisualFoldTable VisualFoldTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return parse(in);
}

std::vector<char32_t> VisualFoldTable::confusables_for(char letter) const {
  std::vector<char32_t> out;
  for (const auto& [cp, target] : entries_) {
    if (target == letter) out.push_back(cp);
  }
  return out;
}

std::string fold_visual(std::string_view word, const VisualFoldTable& table) {
  std::string out;
  out.reserve(word.size());
  for (char32_t cp : utf8::decode(word)) {
    if (utf8::is_combining_mark(cp)) continue;
    if (const char base = utf8::accent_base(cp); base != '\0') cp = base;
    if (const auto folded = table.lookup(cp)) {
      cp = *folded;
    } else if (const auto lower = table.lookup(utf8::to_lower(cp))) {
      cp = *lower;
    }
    if (utf8::is_ascii_alpha(cp)) {
      out.push_back(static_cast<char>(utf8::to_upper(cp)));
    } else if (utf8::is_ascii_digit(cp)) {
      out.push_back(static_cast<char>(cp));
    }
  }
  return out;
}

std::string_view PhoneticCode::prefix() const {
  const auto n = code.find_first_of("0123456789");
  return std::string_view(code).substr(0, n == std::string::npos ? code.size() : n);
}

std::string_view PhoneticCode::digits() const {
  return std::string_view(code).substr(prefix().size());
}

int consonant_class(char upper) {
  switch (upper) {
    case 'B': case 'F': case 'P': case 'V':
      return 1;
    case 'C': case 'G': case 'J': case 'K': case 'Q': case 'S': case 'X': case 'Z':
      return 2;
    case 'D': case 'T':
      return 3;
    case 'L':
      return 4;
    case 'M': case 'N':
      return 5;
    case 'R':
      return 6;
    default:
      return 0;
  }
}

std::optional<PhoneticCode> try_encode(std::string_view word, int level,
                                       const VisualFoldTable& table) {
  if (level < 0) throw Error(ErrorCode::kInvalidArgument, "negative phonetic level");
  std::string letters = fold_visual(word, table);
  std::erase_if(letters, [](char c) { return c < 'A' || c > 'Z'; });
  if (letters.empty()) return std::nullopt;

  const size_t prefix_len = std::min(letters.size(), static_cast<size_t>(level) + 1);
  PhoneticCode out{level, letters.substr(0, prefix_len)};
  out.code.reserve(prefix_len + 4);

  std::string digits;
  int last = consonant_class(letters[prefix_len - 1]);
  for (size_t i = prefix_len; i < letters.size() && digits.size() < 4; ++i) {
    const int cls = consonant_class(letters[i]);
    if (cls != 0 && cls != last) digits.push_back(static_cast<char>('0' + cls));
    last = cls;
  }
  digits.resize(std::max<size_t>(digits.size(), 3), '0');
  out.code += digits;
  return out;
}

PhoneticCode encode(std::string_view word, int level, const VisualFoldTable& table) {
  auto code = try_encode(word, level, table);
  if (!code) {
    throw Error(ErrorCode::kEmptyAfterFold,
                "no letters left after folding '" + std::string(word) + "'");
  }
  return *std::move(code);
}

}  // namespace anthro
