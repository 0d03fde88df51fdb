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

// Brute-force BPE used as a test oracle. It shares no code with the library:
// pre-tokenization is a plain ASCII split and every iteration recounts all
// pairs from scratch. Only meant for tiny ASCII corpora.

#ifndef VOCAB_LIFECYCLE_TESTS_SUPPORT_BPE_REFERENCE_H_
#define VOCAB_LIFECYCLE_TESTS_SUPPORT_BPE_REFERENCE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace vocab_lifecycle::testing {

inline constexpr char kMarker[] = "\xE2\x96\x81";

struct ReferenceMerge {
  std::string left;
  std::string right;
  uint64_t count = 0;

  bool operator==(const ReferenceMerge&) const = default;
};

struct ReferenceModel {
  std::vector<std::string> alphabet;  // frequency desc, then code point
  std::vector<ReferenceMerge> merges;
  std::vector<std::string> learned;   // alphabet then new merge products
};

// `learned_capacity` is target size minus specials minus 256.
ReferenceModel ReferenceTrain(const std::vector<std::string>& lines, size_t learned_capacity,
                              uint64_t min_pair_frequency,
                              const std::vector<std::string>& specials);

// Symbols of one ASCII line, marker-prefixed at word starts, after replaying
// every merge in order (each one over the whole symbol list, left to right).
std::vector<std::string> ReferenceSegment(const ReferenceModel& model, const std::string& line);

}  // namespace vocab_lifecycle::testing

#endif  // VOCAB_LIFECYCLE_TESTS_SUPPORT_BPE_REFERENCE_H_
