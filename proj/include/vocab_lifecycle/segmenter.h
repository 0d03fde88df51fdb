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

#ifndef VOCAB_LIFECYCLE_SEGMENTER_H_
#define VOCAB_LIFECYCLE_SEGMENTER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/vocabulary.h"

namespace vocab_lifecycle {

struct TokenIdSequence {
  std::vector<TokenId> ids;
  std::string vocab_fingerprint;

  bool operator==(const TokenIdSequence&) const = default;
};

// normalize -> pre-tokenize -> replay merges in rank order per pre-token.
// Characters outside the vocabulary become their UTF-8 byte tokens; the
// unknown-token special is never produced. Total over arbitrary bytes.
TokenIdSequence Encode(const Vocabulary& vocab, std::string_view text);

// Segments one pre-token, appending ids to `out`.
void EncodePreToken(const Vocabulary& vocab, const PreToken& pre,
                    std::vector<TokenId>* out);

// Inverse of Encode on normalized text: decode(encode(s)) == NormalizeLine(s).
// Throws on a fingerprint mismatch or an out-of-range id.
std::string Decode(const Vocabulary& vocab, const TokenIdSequence& sequence);

// Token strings for display ("<0xE2>" for byte tokens).
std::vector<std::string> ToPieces(const Vocabulary& vocab,
                                  std::span<const TokenId> ids);

struct EncodeStats {
  uint64_t lines = 0;
  uint64_t total_tokens = 0;
  uint64_t byte_tokens = 0;
  // Tokens consisting of the bare word-start marker.
  uint64_t marker_tokens = 0;
  uint64_t unk_tokens = 0;
  // tokens-per-line -> number of lines
  std::map<uint64_t, uint64_t> tokens_per_line;

  double mean_tokens_per_line() const;
  // byte tokens / all tokens
  double fallback_rate() const;
  // byte tokens / tokens other than bare markers
  double content_fallback_rate() const;
  double unk_rate() const;

  Json ToJson() const;
};

EncodeStats ComputeEncodeStats(const Vocabulary& vocab,
                               std::span<const std::string> lines);
EncodeStats ComputeEncodeStats(const Vocabulary& vocab, const DatasetRecord& dataset);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_SEGMENTER_H_
