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

#ifndef ANTHRO_UTF8_H_
#define ANTHRO_UTF8_H_

#include <string>
#include <string_view>

namespace anthro::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes UTF-8. Each malformed byte becomes U+FFFD.
std::u32string decode(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic capitals. Other code points are returned unchanged.
char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);

std::string to_lower(std::string_view text);

inline bool is_ascii_alpha(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}
inline bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

inline bool is_combining_mark(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x1AB0 && cp <= 0x1AFF) ||
         (cp >= 0x1DC0 && cp <= 0x1DFF) || (cp >= 0x20D0 && cp <= 0x20FF) ||
         (cp >= 0xFE20 && cp <= 0xFE2F);
}

// ASCII base letter of a precomposed Latin letter ('\0' when there is none).
char accent_base(char32_t cp);

// True for ASCII letters, accented Latin letters, Greek and Cyrillic letters.
bool is_letter(char32_t cp);

}  // namespace anthro::utf8

#endif  // ANTHRO_UTF8_H_
