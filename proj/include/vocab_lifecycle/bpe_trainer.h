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

// Byte-pair-encoding vocabulary training with full character coverage and a
// 256-token byte-fallback block.
//
// Training operates on a word-frequency table: every pre-token of the corpus
// (word-start pre-tokens prefixed with the marker) is counted once per
// occurrence. The most frequent adjacent symbol pair is merged repeatedly,
// ties going to the lexicographically smallest (left, right), until the
// vocabulary is full or no pair reaches `min_pair_frequency`.

#ifndef VOCAB_LIFECYCLE_BPE_TRAINER_H_
#define VOCAB_LIFECYCLE_BPE_TRAINER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/unicode.h"
#include "vocab_lifecycle/vocabulary.h"

namespace vocab_lifecycle {

struct TrainConfig {
  uint64_t target_size = 0;
  uint64_t min_pair_frequency = 2;
  std::vector<std::string> specials = DefaultSpecials();
  std::string word_start_marker = std::string(unicode::kWordStartMarkerUtf8);
  // Workers for corpus scanning and pair counting. Results do not depend on it.
  int threads = 1;

  void Validate() const;
};

// Character -> exact occurrence count over all pre-tokens.
using AlphabetCounts = std::map<char32_t, uint64_t>;

AlphabetCounts CollectAlphabet(std::span<const std::string> lines);
AlphabetCounts CollectAlphabet(const CorpusManifest& manifest,
                               std::span<const std::string> dataset_ids);

// Pre-token frequency table in training form. Additive across datasets.
class WordCounts {
 public:
  explicit WordCounts(std::string word_start_marker =
                          std::string(unicode::kWordStartMarkerUtf8))
      : marker_(std::move(word_start_marker)) {}

  void AddLine(std::string_view raw_line);
  void Add(const WordCounts& other);

  const std::unordered_map<std::string, uint64_t>& counts() const { return counts_; }
  const std::string& marker() const { return marker_; }
  bool empty() const { return counts_.empty(); }

 private:
  std::string marker_;
  std::unordered_map<std::string, uint64_t> counts_;
};

WordCounts CountWords(std::span<const std::string> lines, const std::string& marker,
                      int threads = 1);
WordCounts CountWords(const CorpusManifest& manifest,
                      std::span<const std::string> dataset_ids,
                      const std::string& marker, int threads = 1);

using SymbolPair = std::pair<std::string, std::string>;

// True when pair a outranks pair b: higher count, then smaller (left, right).
bool PairPrecedes(uint64_t count_a, std::string_view left_a, std::string_view right_a,
                  uint64_t count_b, std::string_view left_b, std::string_view right_b);

// Maximum-count pair with lexicographic tie-break; nullopt when no pair
// reaches `min_frequency` (training stops there).
std::optional<SymbolPair> SelectBestPair(const std::map<SymbolPair, uint64_t>& pair_counts,
                                         uint64_t min_frequency = 1);

Vocabulary Train(const WordCounts& words, const TrainConfig& config,
                 std::vector<std::string> dataset_ids = {});
Vocabulary TrainOnLines(std::span<const std::string> lines, const TrainConfig& config);
Vocabulary Train(const CorpusManifest& manifest,
                 std::span<const std::string> dataset_ids, const TrainConfig& config);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_BPE_TRAINER_H_
