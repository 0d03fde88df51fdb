// Copyright 2026 The vocab-lifecycle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOCAB_LIFECYCLE_UNICODE_H_
#define VOCAB_LIFECYCLE_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vocab_lifecycle::unicode {

inline constexpr char32_t kReplacementCharacter = 0xFFFD;

// U+2581 LOWER ONE EIGHTH BLOCK, prepended to word-start pre-tokens.
inline constexpr char32_t kWordStartMarker = 0x2581;
inline constexpr std::string_view kWordStartMarkerUtf8 = "\xE2\x96\x81";

bool IsWhitespace(char32_t cp);
bool IsDecimalDigit(char32_t cp);

// Returns `text` with every ill-formed UTF-8 subsequence replaced by U+FFFD.
// Well-formed input is returned unchanged.
std::string SanitizeUtf8(std::string_view text);

// True when `text` is well-formed UTF-8.
bool IsValidUtf8(std::string_view text);

void AppendUtf8(char32_t cp, std::string* out);
std::string EncodeUtf8(char32_t cp);

// Decodes well-formed UTF-8 one code point at a time. Ill-formed input
// yields U+FFFD for each maximal ill-formed subpart.
class Utf8Cursor {
 public:
  explicit Utf8Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  size_t position() const { return pos_; }

  // Advances past one code point; `begin` and `end` receive the byte span.
  char32_t Next(size_t* begin = nullptr, size_t* end = nullptr);

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

// Splits well-formed UTF-8 into one string per code point.
std::vector<std::string> SplitCodePoints(std::string_view text);

size_t CountCodePoints(std::string_view text);

}  // namespace vocab_lifecycle::unicode

#endif  // VOCAB_LIFECYCLE_UNICODE_H_
