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

#include "vocab_lifecycle/vocabulary.h"

#include <cstdio>
#include <unordered_set>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/hash.h"
#include "vocab_lifecycle/unicode.h"

namespace vocab_lifecycle {
namespace {

uint64_t PairKey(TokenId left, TokenId right) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
         static_cast<uint32_t>(right);
}

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, "invalid vocabulary: " + message);
}

}  // namespace

std::vector<std::string> DefaultSpecials() {
  return {"<pad>", "<bos>", "<eos>", "<unk>", "<mask>"};
}

std::string ByteTokenName(uint8_t value) {
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "<0x%02X>", value);
  return buffer;
}

Vocabulary::Vocabulary(std::vector<std::string> specials,
                       std::vector<std::string> learned,
                       std::vector<MergeRule> merges, VocabularyMetadata metadata,
                       std::string word_start_marker)
    : specials_(std::move(specials)),
      merges_(std::move(merges)),
      metadata_(std::move(metadata)),
      word_start_marker_(std::move(word_start_marker)) {
  if (unicode::CountCodePoints(word_start_marker_) != 1 ||
      !unicode::IsValidUtf8(word_start_marker_)) {
    Invalid("word-start marker must be a single character");
  }
  tokens_.reserve(specials_.size() + kByteTokenCount + learned.size());
  for (const auto& s : specials_) tokens_.push_back(s);
  for (int b = 0; b < 256; ++b) tokens_.push_back(ByteTokenName(static_cast<uint8_t>(b)));
  for (auto& t : learned) tokens_.push_back(std::move(t));

  index_.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& t = tokens_[i];
    if (t.empty()) Invalid("empty token at index " + std::to_string(i));
    if (!unicode::IsValidUtf8(t)) Invalid("token " + std::to_string(i) + " is not UTF-8");
    if (!index_.emplace(t, static_cast<TokenId>(i)).second) {
      Invalid("duplicate token '" + t + "'");
    }
  }

  const auto marker_id = index_.find(word_start_marker_);
  if (marker_id == index_.end() || kind(marker_id->second) != TokenKind::kLearned) {
    Invalid("word-start marker is not a learned token");
  }

  // Base symbols are single characters; every other merge operand must have
  // been produced by an earlier rule.
  std::unordered_set<std::string> produced;
  for (size_t r = 0; r < merges_.size(); ++r) {
    const MergeRule& rule = merges_[r];
    if (rule.rank != r) Invalid("merge ranks are not contiguous at " + std::to_string(r));
    if (rule.frequency_at_merge == 0) Invalid("merge with zero frequency");
    for (const std::string* part : {&rule.left, &rule.right}) {
      auto it = index_.find(*part);
      if (it == index_.end() || kind(it->second) != TokenKind::kLearned) {
        Invalid("merge operand '" + *part + "' is not a learned token");
      }
      if (unicode::CountCodePoints(*part) > 1 && !produced.contains(*part)) {
        Invalid("merge " + std::to_string(r) + " uses '" + *part +
                "' before it is produced");
      }
    }
    const std::string merged = rule.merged();
    auto target = index_.find(merged);
    if (target == index_.end() || kind(target->second) != TokenKind::kLearned) {
      Invalid("merge result '" + merged + "' is not a learned token");
    }
    const uint64_t key = PairKey(index_.at(rule.left), index_.at(rule.right));
    if (!merge_table_.emplace(key, MergeTarget{rule.rank, target->second}).second) {
      Invalid("merge pair listed twice at rank " + std::to_string(r));
    }
    produced.insert(merged);
  }

  Sha256 hasher;
  hasher.AddField("vocab-lifecycle/vocabulary/v1");
  hasher.AddField(word_start_marker_);
  hasher.AddInteger(specials_.size());
  for (const auto& s : specials_) hasher.AddField(s);
  hasher.AddInteger(tokens_.size() - learned_offset());
  for (size_t i = learned_offset(); i < tokens_.size(); ++i) hasher.AddField(tokens_[i]);
  hasher.AddInteger(merges_.size());
  for (const auto& m : merges_) {
    hasher.AddField(m.left);
    hasher.AddField(m.right);
    hasher.AddInteger(m.frequency_at_merge);
  }
  fingerprint_ = hasher.FinishHex();
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<size_t>(id) >= tokens_.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "token id " + std::to_string(id) + " out of range [0, " +
                    std::to_string(tokens_.size()) + ")");
  }
  return tokens_[id];
}

TokenKind Vocabulary::kind(TokenId id) const {
  const auto index = static_cast<size_t>(id);
  if (index < specials_.size()) return TokenKind::kSpecial;
  if (index < learned_offset()) return TokenKind::kByte;
  return TokenKind::kLearned;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::index_of(std::string_view token) const {
  auto id = find(token);
  if (!id) {
    throw Error(ErrorCode::kInvalidInput, "token '" + std::string(token) + "' not in vocabulary");
  }
  return *id;
}

std::optional<TokenId> Vocabulary::special(std::string_view name) const {
  for (size_t i = 0; i < specials_.size(); ++i) {
    if (specials_[i] == name) return static_cast<TokenId>(i);
  }
  return std::nullopt;
}

std::optional<Vocabulary::MergeTarget> Vocabulary::merge(TokenId left,
                                                         TokenId right) const {
  auto it = merge_table_.find(PairKey(left, right));
  if (it == merge_table_.end()) return std::nullopt;
  return it->second;
}

Json Vocabulary::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "vocabulary";
  doc["fingerprint"] = fingerprint_;
  doc["word_start_marker"] = word_start_marker_;
  doc["specials"] = specials_;
  doc["byte_fallback"] = true;
  Json learned = Json::array();
  for (size_t i = learned_offset(); i < tokens_.size(); ++i) learned.push_back(tokens_[i]);
  doc["learned"] = std::move(learned);
  Json merges = Json::array();
  for (const auto& m : merges_) {
    merges.push_back(Json::array({m.left, m.right, m.frequency_at_merge}));
  }
  doc["merges"] = std::move(merges);
  Json meta;
  meta["target_size"] = metadata_.target_size;
  meta["character_coverage"] = metadata_.character_coverage;
  meta["training_datasets"] = metadata_.training_datasets;
  doc["metadata"] = std::move(meta);
  StampContentHash(&doc);
  return doc;
}

Vocabulary Vocabulary::FromJson(const Json& json) {
  try {
    if (json.at("format_version").get<int>() != kFormatVersion) {
      Invalid("unsupported format_version");
    }
    if (json.contains("kind") && json["kind"] != "vocabulary") {
      Invalid("document kind is " + json["kind"].dump());
    }
    if (!json.at("byte_fallback").get<bool>()) {
      Invalid("vocabularies without byte fallback are not supported");
    }
    if (json.contains("content_hash") && !ContentHashMatches(json)) {
      Invalid("content hash mismatch");
    }
    std::vector<MergeRule> merges;
    for (const auto& m : json.at("merges")) {
      if (!m.is_array() || m.size() != 3) Invalid("merge entries must be [left, right, frequency]");
      merges.push_back(MergeRule{m[0].get<std::string>(), m[1].get<std::string>(),
                                 static_cast<uint32_t>(merges.size()),
                                 m[2].get<uint64_t>()});
    }
    VocabularyMetadata meta;
    if (json.contains("metadata")) {
      const auto& m = json["metadata"];
      meta.target_size = m.value("target_size", uint64_t{0});
      meta.character_coverage = m.value("character_coverage", 1.0);
      meta.training_datasets =
          m.value("training_datasets", std::vector<std::string>{});
    }
    Vocabulary vocab(json.at("specials").get<std::vector<std::string>>(),
                     json.at("learned").get<std::vector<std::string>>(),
                     std::move(merges), std::move(meta),
                     json.at("word_start_marker").get<std::string>());
    if (json.contains("fingerprint") &&
        json["fingerprint"].get<std::string>() != vocab.fingerprint()) {
      Invalid("fingerprint does not match contents");
    }
    return vocab;
  } catch (const Json::exception& e) {
    Invalid(e.what());
  }
}

Vocabulary Vocabulary::Load(const std::filesystem::path& path) {
  return FromJson(ReadJsonFile(path));
}

void Vocabulary::Save(const std::filesystem::path& path) const {
  WriteFileAtomic(path, DumpJson(ToJson()));
}

}  // namespace vocab_lifecycle
