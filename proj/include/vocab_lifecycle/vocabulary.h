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

#ifndef VOCAB_LIFECYCLE_VOCABULARY_H_
#define VOCAB_LIFECYCLE_VOCABULARY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vocab_lifecycle/file_io.h"

namespace vocab_lifecycle {

using TokenId = int32_t;

inline constexpr size_t kByteTokenCount = 256;

struct MergeRule {
  std::string left;
  std::string right;
  uint32_t rank = 0;
  uint64_t frequency_at_merge = 0;

  std::string merged() const { return left + right; }
  bool operator==(const MergeRule&) const = default;
};

struct VocabularyMetadata {
  uint64_t target_size = 0;
  double character_coverage = 1.0;
  std::vector<std::string> training_datasets;

  bool operator==(const VocabularyMetadata&) const = default;
};

enum class TokenKind { kSpecial, kByte, kLearned };

std::vector<std::string> DefaultSpecials();

// "<0xE2>" style name of the byte-fallback token for `value`.
std::string ByteTokenName(uint8_t value);

// Token table laid out as [specials][256 byte tokens][learned], plus the
// ordered merge rules used to segment text. Immutable once constructed;
// the constructor rejects any table that breaks the layout invariants.
class Vocabulary {
 public:
  static constexpr int kFormatVersion = 1;

  Vocabulary(std::vector<std::string> specials, std::vector<std::string> learned,
             std::vector<MergeRule> merges, VocabularyMetadata metadata,
             std::string word_start_marker);

  size_t size() const { return tokens_.size(); }
  size_t learned_offset() const { return specials_.size() + kByteTokenCount; }

  std::span<const std::string> specials() const { return specials_; }
  std::span<const std::string> learned() const {
    return std::span<const std::string>(tokens_).subspan(learned_offset());
  }
  std::span<const std::string> tokens() const { return tokens_; }
  std::span<const MergeRule> merges() const { return merges_; }
  const VocabularyMetadata& metadata() const { return metadata_; }
  const std::string& word_start_marker() const { return word_start_marker_; }

  const std::string& token(TokenId id) const;
  TokenKind kind(TokenId id) const;
  bool contains(std::string_view token) const;
  std::optional<TokenId> find(std::string_view token) const;
  // Throws when the token is absent.
  TokenId index_of(std::string_view token) const;

  TokenId byte_token(uint8_t value) const {
    return static_cast<TokenId>(specials_.size() + value);
  }
  std::optional<TokenId> special(std::string_view name) const;

  // Merge lookup by operand ids: (rank, id of the merged token).
  struct MergeTarget {
    uint32_t rank;
    TokenId merged;
  };
  std::optional<MergeTarget> merge(TokenId left, TokenId right) const;

  // SHA-256 over the marker, specials, token order and merge list. Two
  // vocabularies with the same fingerprint segment text identically.
  const std::string& fingerprint() const { return fingerprint_; }

  Json ToJson() const;
  static Vocabulary FromJson(const Json& json);
  static Vocabulary Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> specials_;
  std::vector<std::string> tokens_;
  std::vector<MergeRule> merges_;
  VocabularyMetadata metadata_;
  std::string word_start_marker_;
  std::unordered_map<std::string, TokenId> index_;
  std::unordered_map<uint64_t, MergeTarget> merge_table_;
  std::string fingerprint_;
};

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_VOCABULARY_H_
