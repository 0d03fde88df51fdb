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

#include "bpe_reference.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace vocab_lifecycle::testing {
namespace {

using Word = std::vector<std::string>;

// Pieces of a line: space-separated chunks, each ASCII digit on its own.
std::vector<std::pair<std::string, bool>> SplitAscii(const std::string& line) {
  std::vector<std::pair<std::string, bool>> out;
  std::string current;
  bool current_start = false;
  bool chunk_start = true;
  auto flush = [&] {
    if (!current.empty()) out.emplace_back(current, current_start);
    current.clear();
  };
  for (char c : line) {
    if (c == ' ') {
      flush();
      chunk_start = true;
      continue;
    }
    if (c >= '0' && c <= '9') {
      flush();
      out.emplace_back(std::string(1, c), chunk_start);
      chunk_start = false;
      continue;
    }
    if (current.empty()) {
      current_start = chunk_start;
      chunk_start = false;
    }
    current.push_back(c);
  }
  flush();
  return out;
}

Word ToSymbols(const std::string& piece, bool word_start) {
  Word w;
  if (word_start) w.push_back(kMarker);
  for (char c : piece) w.push_back(std::string(1, c));
  return w;
}

Word ApplyMerge(const Word& w, const std::string& left, const std::string& right) {
  Word out;
  for (size_t i = 0; i < w.size();) {
    if (i + 1 < w.size() && w[i] == left && w[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
    } else {
      out.push_back(w[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

ReferenceModel ReferenceTrain(const std::vector<std::string>& lines, size_t learned_capacity,
                              uint64_t min_pair_frequency,
                              const std::vector<std::string>& specials) {
  std::map<Word, uint64_t> words;
  for (const auto& line : lines) {
    for (const auto& [piece, start] : SplitAscii(line)) ++words[ToSymbols(piece, start)];
  }

  std::map<std::string, uint64_t> chars;
  for (const auto& [w, n] : words) {
    for (const auto& s : w) chars[s] += n;
  }
  chars.emplace(kMarker, 0);
  std::vector<std::pair<std::string, uint64_t>> order(chars.begin(), chars.end());
  // For ASCII plus the marker, byte order equals code point order.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  ReferenceModel model;
  for (const auto& [c, n] : order) model.alphabet.push_back(c);
  model.learned = model.alphabet;
  std::set<std::string> known(model.learned.begin(), model.learned.end());
  const std::set<std::string> reserved(specials.begin(), specials.end());

  while (model.learned.size() < learned_capacity) {
    std::map<std::pair<std::string, std::string>, uint64_t> pairs;
    for (const auto& [w, n] : words) {
      for (size_t i = 0; i + 1 < w.size(); ++i) pairs[{w[i], w[i + 1]}] += n;
    }
    const std::pair<std::string, std::string>* best = nullptr;
    uint64_t best_count = 0;
    // std::map iterates in (left, right) order, so the first maximum wins ties.
    for (const auto& [p, n] : pairs) {
      if (reserved.contains(p.first + p.second)) continue;
      if (n > best_count) {
        best = &p;
        best_count = n;
      }
    }
    if (best == nullptr || best_count < min_pair_frequency) break;
    const std::string left = best->first;
    const std::string right = best->second;
    model.merges.push_back({left, right, best_count});
    if (known.insert(left + right).second) model.learned.push_back(left + right);
    std::map<Word, uint64_t> next;
    for (const auto& [w, n] : words) next[ApplyMerge(w, left, right)] += n;
    words = std::move(next);
  }
  return model;
}

std::vector<std::string> ReferenceSegment(const ReferenceModel& model, const std::string& line) {
  std::vector<std::string> out;
  for (const auto& [piece, start] : SplitAscii(line)) {
    Word w = ToSymbols(piece, start);
    for (const auto& m : model.merges) w = ApplyMerge(w, m.left, m.right);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

}  // namespace vocab_lifecycle::testing
