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

#include "vocab_lifecycle/segmenter.h"

#include <limits>
#include <unordered_map>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/unicode.h"

namespace vocab_lifecycle {
namespace {

constexpr TokenId kFallback = -1;

struct Symbol {
  TokenId id;
  std::string_view text;  // source bytes, used when id == kFallback
};

std::optional<TokenId> LearnedId(const Vocabulary& vocab, std::string_view text) {
  auto id = vocab.find(text);
  if (id && vocab.kind(*id) == TokenKind::kLearned) return id;
  return std::nullopt;
}

}  // namespace

void EncodePreToken(const Vocabulary& vocab, const PreToken& pre,
                    std::vector<TokenId>* out) {
  const std::string& marker = vocab.word_start_marker();
  std::vector<Symbol> symbols;
  symbols.reserve(pre.text.size() + 1);
  if (pre.is_word_start) symbols.push_back(Symbol{vocab.index_of(marker), marker});

  std::string_view text = pre.text;
  unicode::Utf8Cursor cursor(text);
  while (!cursor.done()) {
    size_t begin = 0;
    size_t end = 0;
    cursor.Next(&begin, &end);
    const std::string_view c = text.substr(begin, end - begin);
    // A literal marker always falls back to bytes so decode keeps it literal.
    const std::optional<TokenId> id =
        c == marker ? std::nullopt : LearnedId(vocab, c);
    symbols.push_back(Symbol{id.value_or(kFallback), c});
  }

  // Apply rules strictly in increasing rank, each rank once over all its
  // occurrences, which is exactly how training rewrote its words.
  int64_t last_rank = -1;
  for (;;) {
    int64_t best_rank = std::numeric_limits<int64_t>::max();
    TokenId best_left = kFallback;
    TokenId best_right = kFallback;
    TokenId best_merged = kFallback;
    for (size_t k = 0; k + 1 < symbols.size(); ++k) {
      if (symbols[k].id == kFallback || symbols[k + 1].id == kFallback) continue;
      auto target = vocab.merge(symbols[k].id, symbols[k + 1].id);
      if (!target || static_cast<int64_t>(target->rank) <= last_rank) continue;
      if (target->rank < best_rank) {
        best_rank = target->rank;
        best_left = symbols[k].id;
        best_right = symbols[k + 1].id;
        best_merged = target->merged;
      }
    }
    if (best_merged == kFallback) break;
    std::vector<Symbol> next;
    next.reserve(symbols.size());
    for (size_t k = 0; k < symbols.size();) {
      if (k + 1 < symbols.size() && symbols[k].id == best_left &&
          symbols[k + 1].id == best_right) {
        next.push_back(Symbol{best_merged, {}});
        k += 2;
      } else {
        next.push_back(symbols[k]);
        ++k;
      }
    }
    symbols = std::move(next);
    last_rank = best_rank;
  }

  for (const Symbol& s : symbols) {
    if (s.id != kFallback) {
      out->push_back(s.id);
      continue;
    }
    for (unsigned char byte : s.text) out->push_back(vocab.byte_token(byte));
  }
}

TokenIdSequence Encode(const Vocabulary& vocab, std::string_view text) {
  TokenIdSequence seq;
  seq.vocab_fingerprint = vocab.fingerprint();
  for (const auto& pre : Pretokenize(NormalizeLine(text))) {
    EncodePreToken(vocab, pre, &seq.ids);
  }
  return seq;
}

std::string Decode(const Vocabulary& vocab, const TokenIdSequence& sequence) {
  if (sequence.vocab_fingerprint != vocab.fingerprint()) {
    throw Error(ErrorCode::kInvalidInput,
                "token sequence was produced by a different vocabulary");
  }
  const std::string& marker = vocab.word_start_marker();
  std::string out;
  std::string bytes;
  bool strip_leading_space = false;
  bool emitted = false;
  auto flush_bytes = [&] {
    if (bytes.empty()) return;
    out += unicode::SanitizeUtf8(bytes);
    bytes.clear();
    emitted = true;
  };
  for (TokenId id : sequence.ids) {
    const std::string& piece = vocab.token(id);  // range-checked
    switch (vocab.kind(id)) {
      case TokenKind::kSpecial:
        flush_bytes();
        break;
      case TokenKind::kByte:
        bytes.push_back(static_cast<char>(id - vocab.byte_token(0)));
        break;
      case TokenKind::kLearned: {
        flush_bytes();
        if (!emitted && piece.starts_with(marker)) strip_leading_space = true;
        emitted = true;
        size_t pos = 0;
        for (;;) {
          const size_t hit = piece.find(marker, pos);
          out.append(piece, pos, hit == std::string::npos ? std::string::npos : hit - pos);
          if (hit == std::string::npos) break;
          out.push_back(' ');
          pos = hit + marker.size();
        }
        break;
      }
    }
  }
  flush_bytes();
  if (strip_leading_space && !out.empty() && out.front() == ' ') out.erase(0, 1);
  return out;
}

std::vector<std::string> ToPieces(const Vocabulary& vocab, std::span<const TokenId> ids) {
  std::vector<std::string> pieces;
  pieces.reserve(ids.size());
  for (TokenId id : ids) pieces.push_back(vocab.token(id));
  return pieces;
}

double EncodeStats::mean_tokens_per_line() const {
  return lines == 0 ? 0.0 : static_cast<double>(total_tokens) / lines;
}

double EncodeStats::fallback_rate() const {
  return total_tokens == 0 ? 0.0 : static_cast<double>(byte_tokens) / total_tokens;
}

double EncodeStats::content_fallback_rate() const {
  const uint64_t content = total_tokens - marker_tokens;
  return content == 0 ? 0.0 : static_cast<double>(byte_tokens) / content;
}

double EncodeStats::unk_rate() const {
  return total_tokens == 0 ? 0.0 : static_cast<double>(unk_tokens) / total_tokens;
}

Json EncodeStats::ToJson() const {
  Json doc;
  doc["lines"] = lines;
  doc["total_tokens"] = total_tokens;
  doc["byte_tokens"] = byte_tokens;
  doc["marker_tokens"] = marker_tokens;
  doc["unk_tokens"] = unk_tokens;
  doc["mean_tokens_per_line"] = mean_tokens_per_line();
  doc["fallback_rate"] = fallback_rate();
  doc["content_fallback_rate"] = content_fallback_rate();
  doc["unk_rate"] = unk_rate();
  Json hist = Json::array();
  for (const auto& [tokens, count] : tokens_per_line) hist.push_back({tokens, count});
  doc["tokens_per_line"] = std::move(hist);
  return doc;
}

EncodeStats ComputeEncodeStats(const Vocabulary& vocab,
                               std::span<const std::string> lines) {
  EncodeStats stats;
  const TokenId marker = vocab.index_of(vocab.word_start_marker());
  const std::optional<TokenId> unk = vocab.special("<unk>");
  std::unordered_map<std::string, std::vector<TokenId>> cache[2];
  std::vector<TokenId> ids;
  for (const auto& line : lines) {
    ids.clear();
    for (const auto& pre : Pretokenize(NormalizeLine(line))) {
      auto& slot = cache[pre.is_word_start ? 1 : 0];
      auto it = slot.find(pre.text);
      if (it == slot.end()) {
        std::vector<TokenId> piece;
        EncodePreToken(vocab, pre, &piece);
        it = slot.emplace(pre.text, std::move(piece)).first;
      }
      ids.insert(ids.end(), it->second.begin(), it->second.end());
    }
    ++stats.lines;
    stats.total_tokens += ids.size();
    ++stats.tokens_per_line[ids.size()];
    for (TokenId id : ids) {
      if (vocab.kind(id) == TokenKind::kByte) ++stats.byte_tokens;
      if (id == marker) ++stats.marker_tokens;
      if (unk && id == *unk) ++stats.unk_tokens;
    }
  }
  return stats;
}

EncodeStats ComputeEncodeStats(const Vocabulary& vocab, const DatasetRecord& dataset) {
  return ComputeEncodeStats(vocab, ReadLines(dataset));
}

}  // namespace vocab_lifecycle
