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

// Swapping a model's vocabulary for a rebuilt one without moving the tokens
// the two have in common. Tokens that only exist in the new vocabulary take
// over the rows of dropped tokens; any excess gets freshly initialized rows.

#ifndef VOCAB_LIFECYCLE_VOCAB_SUBSTITUTION_H_
#define VOCAB_LIFECYCLE_VOCAB_SUBSTITUTION_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vocab_lifecycle/embedding_store.h"
#include "vocab_lifecycle/file_io.h"
#include "vocab_lifecycle/vocabulary.h"

namespace vocab_lifecycle {

enum class InitRule { kMean, kGaussian };

std::string_view ToString(InitRule rule);
InitRule ParseInitRule(std::string_view text);

enum class EntryKind { kReuseShared, kReuseRecycled, kFresh };

std::string_view ToString(EntryKind kind);

struct MigrationEntry {
  uint64_t new_index = 0;
  EntryKind kind = EntryKind::kReuseShared;
  uint64_t old_index = 0;            // unused for kFresh
  InitRule init = InitRule::kMean;   // used only for kFresh

  bool operator==(const MigrationEntry&) const = default;
};

struct MigrationPlan {
  static constexpr int kFormatVersion = 1;

  uint64_t old_size = 0;
  uint64_t new_size = 0;
  std::string old_fingerprint;
  std::string new_fingerprint;
  std::vector<MigrationEntry> entries;  // ascending new_index
  std::string checksum;

  // SHA-256 over sizes, fingerprints and the entry list.
  std::string ComputeChecksum() const;

  uint64_t count(EntryKind kind) const;

  Json ToJson() const;
  // Rejects a checksum that does not match the entries.
  static MigrationPlan FromJson(const Json& json);
  static MigrationPlan Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  bool operator==(const MigrationPlan&) const = default;
};

struct SubstitutionResult {
  Vocabulary reindexed_vocab;
  MigrationPlan plan;
};

// Throws "incompatible layouts" when the specials differ, or when the new
// vocabulary is smaller and a kept index would fall outside it.
SubstitutionResult PlanSubstitution(const Vocabulary& old_vocab, const Vocabulary& new_vocab,
                                    InitRule fresh_init = InitRule::kMean);

// Copies reused rows bitwise. Fresh rows get the column mean of the old table,
// or N(0, s^2) where s is the population std-dev of all old values.
EmbeddingStore ApplyMigration(const MigrationPlan& plan, const EmbeddingStore& old_store,
                              uint64_t seed);

struct DiagnosticCheck {
  std::string name;
  bool passed = true;
  uint64_t violations = 0;
  std::string failure;  // fixed label describing the violated invariant
};

struct SubstitutionDiagnostics {
  std::vector<DiagnosticCheck> checks;

  bool passed() const;
  const DiagnosticCheck* Find(std::string_view name) const;
  // Failure labels of all failed checks.
  std::vector<std::string> failures() const;
  Json ToJson() const;
};

// Never throws; every problem becomes a failed check.
SubstitutionDiagnostics VerifySubstitution(const SubstitutionResult& result,
                                           const Vocabulary& old_vocab,
                                           const Vocabulary& new_vocab);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_VOCAB_SUBSTITUTION_H_
