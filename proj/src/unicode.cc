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

#include "vocab_lifecycle/unicode.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace vocab_lifecycle::unicode {

bool IsWhitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool IsDecimalDigit(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

char32_t Utf8Cursor::Next(size_t* begin, size_t* end) {
  const auto* data = reinterpret_cast<const uint8_t*>(text_.data());
  const auto length = static_cast<int32_t>(text_.size());
  auto offset = static_cast<int32_t>(pos_);
  if (begin != nullptr) *begin = pos_;
  UChar32 cp = 0;
  U8_NEXT_OR_FFFD(data, offset, length, cp);
  pos_ = static_cast<size_t>(offset);
  if (end != nullptr) *end = pos_;
  return static_cast<char32_t>(cp);
}

std::string SanitizeUtf8(std::string_view text) {
  if (IsValidUtf8(text)) return std::string(text);
  std::string out;
  out.reserve(text.size() + 8);
  Utf8Cursor cursor(text);
  while (!cursor.done()) AppendUtf8(cursor.Next(), &out);
  return out;
}

bool IsValidUtf8(std::string_view text) {
  const auto* data = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t offset = 0;
  while (offset < length) {
    UChar32 cp = 0;
    U8_NEXT(data, offset, length, cp);
    if (cp < 0) return false;
  }
  return true;
}

void AppendUtf8(char32_t cp, std::string* out) {
  uint8_t buffer[U8_MAX_LENGTH];
  int32_t length = 0;
  UBool error = false;
  U8_APPEND(buffer, length, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) {
    AppendUtf8(kReplacementCharacter, out);
    return;
  }
  out->append(reinterpret_cast<const char*>(buffer), length);
}

std::string EncodeUtf8(char32_t cp) {
  std::string out;
  AppendUtf8(cp, &out);
  return out;
}

std::vector<std::string> SplitCodePoints(std::string_view text) {
  std::vector<std::string> out;
  Utf8Cursor cursor(text);
  while (!cursor.done()) {
    size_t begin = 0;
    size_t end = 0;
    cursor.Next(&begin, &end);
    out.emplace_back(text.substr(begin, end - begin));
  }
  return out;
}

size_t CountCodePoints(std::string_view text) {
  size_t count = 0;
  Utf8Cursor cursor(text);
  while (!cursor.done()) {
    cursor.Next();
    ++count;
  }
  return count;
}

}  // namespace vocab_lifecycle::unicode
