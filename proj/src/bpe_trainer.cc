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

#include "vocab_lifecycle/bpe_trainer.h"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/parallel.h"

namespace vocab_lifecycle {
namespace {

uint64_t PairKey(int32_t left, int32_t right) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
         static_cast<uint32_t>(right);
}
int32_t PairLeft(uint64_t key) { return static_cast<int32_t>(key >> 32); }
int32_t PairRight(uint64_t key) { return static_cast<int32_t>(key & 0xFFFFFFFFu); }

// Incremental BPE over a fixed word table. Pair counts are kept exact after
// every merge by removing and re-adding the pairs of each touched word, so
// the state always equals a from-scratch recount.
class MergeLoop {
 public:
  MergeLoop(const WordCounts& words, const TrainConfig& config)
      : config_(config),
        blocked_(config.specials.begin(), config.specials.end()) {
    BuildAlphabet(words);
    BuildWords(words);
    CountInitialPairs();
  }

  Vocabulary Run(std::vector<std::string> dataset_ids) {
    const uint64_t capacity =
        config_.target_size - config_.specials.size() - kByteTokenCount;
    while (learned_.size() < capacity) {
      auto best = PopBest();
      if (!best) break;
      ApplyMerge(best->first, best->second);
    }
    VocabularyMetadata meta;
    meta.target_size = config_.target_size;
    meta.character_coverage = 1.0;
    meta.training_datasets = std::move(dataset_ids);
    return Vocabulary(config_.specials, learned_, merges_, std::move(meta),
                      config_.word_start_marker);
  }

 private:
  struct HeapEntry {
    int64_t count;
    uint64_t key;
  };

  struct HeapOrder {
    const std::vector<std::string>* symbols;
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      // priority_queue pops the greatest element; "less" means "ranks below".
      const auto& s = *symbols;
      return PairPrecedes(b.count, s[PairLeft(b.key)], s[PairRight(b.key)], a.count,
                          s[PairLeft(a.key)], s[PairRight(a.key)]);
    }
  };

  void BuildAlphabet(const WordCounts& words) {
    std::map<std::string, uint64_t> chars;
    chars[config_.word_start_marker] += 0;
    for (const auto& [word, freq] : words.counts()) {
      for (auto& c : unicode::SplitCodePoints(word)) chars[c] += freq;
    }
    const uint64_t needed = chars.size() + config_.specials.size() + kByteTokenCount;
    if (needed > config_.target_size) {
      throw Error(ErrorCode::kDomain,
                  "coverage overflow: " + std::to_string(chars.size()) +
                      " characters need a vocabulary of at least " +
                      std::to_string(needed) + ", target is " +
                      std::to_string(config_.target_size));
    }
    std::vector<std::pair<std::string, uint64_t>> ordered(chars.begin(), chars.end());
    // Frequency descending, then code point (UTF-8 byte order) ascending.
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (auto& [c, freq] : ordered) AddSymbol(c);
  }

  int32_t AddSymbol(const std::string& text) {
    auto [it, inserted] = symbol_ids_.emplace(text, static_cast<int32_t>(learned_.size()));
    if (inserted) learned_.push_back(text);
    return it->second;
  }

  void BuildWords(const WordCounts& words) {
    std::vector<std::pair<std::string, uint64_t>> sorted(words.counts().begin(),
                                                         words.counts().end());
    std::sort(sorted.begin(), sorted.end());
    word_symbols_.reserve(sorted.size());
    word_freq_.reserve(sorted.size());
    for (const auto& [word, freq] : sorted) {
      std::vector<int32_t> syms;
      for (const auto& c : unicode::SplitCodePoints(word)) syms.push_back(symbol_ids_.at(c));
      word_symbols_.push_back(std::move(syms));
      word_freq_.push_back(static_cast<int64_t>(freq));
    }
  }

  void CountInitialPairs() {
    const size_t n = word_symbols_.size();
    const int workers = std::max(1, config_.threads);
    std::vector<std::unordered_map<uint64_t, int64_t>> partial(workers);
    ParallelChunks(n, workers, [&](int w, size_t begin, size_t end) {
      auto& local = partial[w];
      for (size_t i = begin; i < end; ++i) {
        const auto& syms = word_symbols_[i];
        for (size_t k = 0; k + 1 < syms.size(); ++k) {
          local[PairKey(syms[k], syms[k + 1])] += word_freq_[i];
        }
      }
    });
    // Integer sums commute, so the totals do not depend on the worker count.
    for (auto& local : partial) {
      for (const auto& [key, count] : local) pair_counts_[key] += count;
    }
    for (size_t i = 0; i < n; ++i) {
      const auto& syms = word_symbols_[i];
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        pair_words_[PairKey(syms[k], syms[k + 1])].push_back(static_cast<uint32_t>(i));
      }
    }
    for (const auto& [key, count] : pair_counts_) Push(key, count);
  }

  void Push(uint64_t key, int64_t count) {
    if (count >= static_cast<int64_t>(config_.min_pair_frequency)) {
      heap_.push(HeapEntry{count, key});
    }
  }

  std::optional<std::pair<uint64_t, int64_t>> PopBest() {
    while (!heap_.empty()) {
      const HeapEntry top = heap_.top();
      heap_.pop();
      auto it = pair_counts_.find(top.key);
      if (it == pair_counts_.end() || it->second != top.count) continue;  // stale
      if (blocked_.contains(learned_[PairLeft(top.key)] + learned_[PairRight(top.key)])) {
        continue;
      }
      return std::make_pair(top.key, top.count);
    }
    return std::nullopt;
  }

  void ApplyMerge(uint64_t key, int64_t frequency) {
    const int32_t left = PairLeft(key);
    const int32_t right = PairRight(key);
    merges_.push_back(MergeRule{learned_[left], learned_[right],
                                static_cast<uint32_t>(merges_.size()),
                                static_cast<uint64_t>(frequency)});
    const int32_t merged = AddSymbol(learned_[left] + learned_[right]);

    std::vector<uint32_t> touched = std::move(pair_words_[key]);
    pair_words_.erase(key);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    std::unordered_set<uint64_t> changed;
    for (uint32_t w : touched) {
      auto& syms = word_symbols_[w];
      const int64_t freq = word_freq_[w];
      bool present = false;
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        if (syms[k] == left && syms[k + 1] == right) {
          present = true;
          break;
        }
      }
      if (!present) continue;
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        const uint64_t p = PairKey(syms[k], syms[k + 1]);
        pair_counts_[p] -= freq;
        changed.insert(p);
      }
      std::vector<int32_t> next;
      next.reserve(syms.size());
      for (size_t k = 0; k < syms.size();) {
        if (k + 1 < syms.size() && syms[k] == left && syms[k + 1] == right) {
          next.push_back(merged);
          k += 2;
        } else {
          next.push_back(syms[k]);
          ++k;
        }
      }
      syms = std::move(next);
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        const uint64_t p = PairKey(syms[k], syms[k + 1]);
        pair_counts_[p] += freq;
        pair_words_[p].push_back(w);
        changed.insert(p);
      }
    }
    std::vector<uint64_t> order(changed.begin(), changed.end());
    std::sort(order.begin(), order.end());
    for (uint64_t p : order) {
      auto it = pair_counts_.find(p);
      if (it->second <= 0) {
        pair_counts_.erase(it);
        continue;
      }
      Push(p, it->second);
    }
  }

  const TrainConfig& config_;
  std::unordered_set<std::string> blocked_;
  std::vector<std::string> learned_;
  std::unordered_map<std::string, int32_t> symbol_ids_;
  std::vector<MergeRule> merges_;
  std::vector<std::vector<int32_t>> word_symbols_;
  std::vector<int64_t> word_freq_;
  std::unordered_map<uint64_t, int64_t> pair_counts_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> pair_words_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap_{
      HeapOrder{&learned_}};
};

}  // namespace

void TrainConfig::Validate() const {
  if (min_pair_frequency == 0) {
    throw Error(ErrorCode::kInvalidInput, "min_pair_frequency must be positive");
  }
  if (target_size <= specials.size() + kByteTokenCount) {
    throw Error(ErrorCode::kInvalidInput,
                "target_size must exceed specials + 256 (" +
                    std::to_string(specials.size() + kByteTokenCount) + ")");
  }
  std::unordered_set<std::string> seen;
  for (const auto& s : specials) {
    if (s.empty() || !seen.insert(s).second) {
      throw Error(ErrorCode::kInvalidInput, "specials must be distinct and non-empty");
    }
  }
  if (unicode::CountCodePoints(word_start_marker) != 1) {
    throw Error(ErrorCode::kInvalidInput, "word_start_marker must be one character");
  }
}

AlphabetCounts CollectAlphabet(std::span<const std::string> lines) {
  AlphabetCounts counts;
  for (const auto& line : lines) {
    for (const auto& pre : Pretokenize(NormalizeLine(line))) {
      unicode::Utf8Cursor cursor(pre.text);
      while (!cursor.done()) ++counts[cursor.Next()];
    }
  }
  return counts;
}

AlphabetCounts CollectAlphabet(const CorpusManifest& manifest,
                               std::span<const std::string> dataset_ids) {
  if (dataset_ids.empty()) {
    throw Error(ErrorCode::kDomain, "empty dataset selection");
  }
  AlphabetCounts total;
  for (const auto& record : manifest.Select(dataset_ids)) {
    for (const auto& [c, n] : CollectAlphabet(ReadLines(record))) total[c] += n;
  }
  return total;
}

void WordCounts::AddLine(std::string_view raw_line) {
  for (const auto& pre : Pretokenize(NormalizeLine(raw_line))) {
    // A literal marker character cannot be told apart from the synthetic
    // one, so it is kept out of the statistics and splits the pre-token.
    std::string_view text = pre.text;
    bool word_start = pre.is_word_start;
    for (;;) {
      const size_t cut = text.find(marker_);
      const std::string_view piece = text.substr(0, cut);
      if (word_start) {
        ++counts_[marker_ + std::string(piece)];
      } else if (!piece.empty()) {
        ++counts_[std::string(piece)];
      }
      if (cut == std::string_view::npos) break;
      text.remove_prefix(cut + marker_.size());
      word_start = false;
    }
  }
}

void WordCounts::Add(const WordCounts& other) {
  for (const auto& [word, n] : other.counts_) counts_[word] += n;
}

WordCounts CountWords(std::span<const std::string> lines, const std::string& marker,
                      int threads) {
  const int workers = std::max(1, threads);
  std::vector<WordCounts> partial(workers, WordCounts(marker));
  ParallelChunks(lines.size(), workers, [&](int w, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) partial[w].AddLine(lines[i]);
  });
  WordCounts total(marker);
  for (const auto& p : partial) total.Add(p);
  return total;
}

WordCounts CountWords(const CorpusManifest& manifest,
                      std::span<const std::string> dataset_ids,
                      const std::string& marker, int threads) {
  if (dataset_ids.empty()) {
    throw Error(ErrorCode::kDomain, "empty dataset selection");
  }
  WordCounts total(marker);
  for (const auto& record : manifest.Select(dataset_ids)) {
    total.Add(CountWords(ReadLines(record), marker, threads));
  }
  return total;
}

bool PairPrecedes(uint64_t count_a, std::string_view left_a, std::string_view right_a,
                  uint64_t count_b, std::string_view left_b, std::string_view right_b) {
  if (count_a != count_b) return count_a > count_b;
  if (left_a != left_b) return left_a < left_b;
  return right_a < right_b;
}

std::optional<SymbolPair> SelectBestPair(const std::map<SymbolPair, uint64_t>& pair_counts,
                                         uint64_t min_frequency) {
  const std::pair<const SymbolPair, uint64_t>* best = nullptr;
  for (const auto& entry : pair_counts) {
    if (entry.second < min_frequency || entry.second == 0) continue;
    if (best == nullptr ||
        PairPrecedes(entry.second, entry.first.first, entry.first.second, best->second,
                     best->first.first, best->first.second)) {
      best = &entry;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->first;
}

Vocabulary Train(const WordCounts& words, const TrainConfig& config,
                 std::vector<std::string> dataset_ids) {
  config.Validate();
  if (words.marker() != config.word_start_marker) {
    throw Error(ErrorCode::kInvalidInput, "word table was built with a different marker");
  }
  if (words.empty()) {
    throw Error(ErrorCode::kDomain, "empty corpus");
  }
  MergeLoop loop(words, config);
  return loop.Run(std::move(dataset_ids));
}

Vocabulary TrainOnLines(std::span<const std::string> lines, const TrainConfig& config) {
  config.Validate();
  return Train(CountWords(lines, config.word_start_marker, config.threads), config);
}

Vocabulary Train(const CorpusManifest& manifest,
                 std::span<const std::string> dataset_ids, const TrainConfig& config) {
  config.Validate();
  WordCounts words =
      CountWords(manifest, dataset_ids, config.word_start_marker, config.threads);
  return Train(words, config,
               std::vector<std::string>(dataset_ids.begin(), dataset_ids.end()));
}

}  // namespace vocab_lifecycle
