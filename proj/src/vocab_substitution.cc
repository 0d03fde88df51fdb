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

#include "vocab_lifecycle/vocab_substitution.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/hash.h"
#include "vocab_lifecycle/random.h"

namespace vocab_lifecycle {
namespace {

[[noreturn]] void Incompatible(const std::string& why) {
  throw Error(ErrorCode::kInvalidInput, "incompatible layouts: " + why);
}

EntryKind ParseEntryKind(std::string_view text) {
  if (text == "reuse_shared") return EntryKind::kReuseShared;
  if (text == "reuse_recycled") return EntryKind::kReuseRecycled;
  if (text == "fresh") return EntryKind::kFresh;
  throw Error(ErrorCode::kInvalidInput, "unknown migration entry kind '" + std::string(text) + "'");
}

}  // namespace

std::string_view ToString(InitRule rule) {
  return rule == InitRule::kMean ? "mean" : "gaussian";
}

InitRule ParseInitRule(std::string_view text) {
  if (text == "mean") return InitRule::kMean;
  if (text == "gaussian") return InitRule::kGaussian;
  throw Error(ErrorCode::kInvalidInput,
              "unknown init rule '" + std::string(text) + "' (expected mean or gaussian)");
}

std::string_view ToString(EntryKind kind) {
  switch (kind) {
    case EntryKind::kReuseShared:
      return "reuse_shared";
    case EntryKind::kReuseRecycled:
      return "reuse_recycled";
    case EntryKind::kFresh:
      return "fresh";
  }
  return "fresh";
}

std::string MigrationPlan::ComputeChecksum() const {
  Sha256 h;
  h.AddField("vocab-lifecycle/migration-plan/v1");
  h.AddInteger(old_size);
  h.AddInteger(new_size);
  h.AddField(old_fingerprint);
  h.AddField(new_fingerprint);
  h.AddInteger(entries.size());
  for (const auto& e : entries) {
    h.AddInteger(e.new_index);
    h.AddField(ToString(e.kind));
    if (e.kind == EntryKind::kFresh) {
      h.AddField(ToString(e.init));
    } else {
      h.AddInteger(e.old_index);
    }
  }
  return h.FinishHex();
}

uint64_t MigrationPlan::count(EntryKind kind) const {
  return std::count_if(entries.begin(), entries.end(),
                       [kind](const MigrationEntry& e) { return e.kind == kind; });
}

Json MigrationPlan::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "migration_plan";
  doc["old_size"] = old_size;
  doc["new_size"] = new_size;
  doc["old_fingerprint"] = old_fingerprint;
  doc["new_fingerprint"] = new_fingerprint;
  Json list = Json::array();
  for (const auto& e : entries) {
    Json item;
    item["new_index"] = e.new_index;
    item["kind"] = ToString(e.kind);
    if (e.kind == EntryKind::kFresh) {
      item["init"] = ToString(e.init);
    } else {
      item["old_index"] = e.old_index;
    }
    list.push_back(std::move(item));
  }
  doc["entries"] = std::move(list);
  doc["checksum"] = checksum;
  StampContentHash(&doc);
  return doc;
}

MigrationPlan MigrationPlan::FromJson(const Json& json) {
  MigrationPlan plan;
  try {
    if (json.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::kInvalidInput, "unsupported migration plan format_version");
    }
    if (json.contains("content_hash") && !ContentHashMatches(json)) {
      throw Error(ErrorCode::kInvalidInput, "migration plan content hash mismatch");
    }
    plan.old_size = json.at("old_size").get<uint64_t>();
    plan.new_size = json.at("new_size").get<uint64_t>();
    plan.old_fingerprint = json.at("old_fingerprint").get<std::string>();
    plan.new_fingerprint = json.at("new_fingerprint").get<std::string>();
    for (const auto& item : json.at("entries")) {
      MigrationEntry e;
      e.new_index = item.at("new_index").get<uint64_t>();
      e.kind = ParseEntryKind(item.at("kind").get<std::string>());
      if (e.kind == EntryKind::kFresh) {
        e.init = ParseInitRule(item.at("init").get<std::string>());
      } else {
        e.old_index = item.at("old_index").get<uint64_t>();
      }
      plan.entries.push_back(e);
    }
    plan.checksum = json.at("checksum").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed migration plan: ") + e.what());
  }
  if (plan.checksum != plan.ComputeChecksum()) {
    throw Error(ErrorCode::kInvalidInput, "migration plan checksum mismatch");
  }
  return plan;
}

MigrationPlan MigrationPlan::Load(const std::filesystem::path& path) {
  return FromJson(ReadJsonFile(path));
}

void MigrationPlan::Save(const std::filesystem::path& path) const {
  WriteFileAtomic(path, DumpJson(ToJson()));
}

SubstitutionResult PlanSubstitution(const Vocabulary& old_vocab, const Vocabulary& new_vocab,
                                    InitRule fresh_init) {
  if (!std::ranges::equal(old_vocab.specials(), new_vocab.specials())) {
    Incompatible("special token lists differ");
  }
  const uint64_t offset = old_vocab.learned_offset();
  const uint64_t old_size = old_vocab.size();
  const uint64_t new_size = new_vocab.size();

  std::vector<uint64_t> freed;
  for (uint64_t i = offset; i < old_size; ++i) {
    if (!new_vocab.contains(old_vocab.tokens()[i])) freed.push_back(i);
  }

  // index -> (token, entry); filled for every index that ends up in use.
  std::vector<std::pair<uint64_t, std::string>> placed;
  std::vector<MigrationEntry> entries;
  placed.reserve(new_size);
  for (uint64_t i = 0; i < offset; ++i) {
    entries.push_back(MigrationEntry{i, EntryKind::kReuseShared, i, fresh_init});
  }
  size_t next_freed = 0;
  uint64_t next_fresh = old_size;
  for (uint64_t j = offset; j < new_size; ++j) {
    const std::string& t = new_vocab.tokens()[j];
    if (auto old_id = old_vocab.find(t)) {
      const auto i = static_cast<uint64_t>(*old_id);
      entries.push_back(MigrationEntry{i, EntryKind::kReuseShared, i, fresh_init});
      placed.emplace_back(i, t);
    } else if (next_freed < freed.size()) {
      const uint64_t i = freed[next_freed++];
      entries.push_back(MigrationEntry{i, EntryKind::kReuseRecycled, i, fresh_init});
      placed.emplace_back(i, t);
    } else {
      const uint64_t i = next_fresh++;
      entries.push_back(MigrationEntry{i, EntryKind::kFresh, 0, fresh_init});
      placed.emplace_back(i, t);
    }
  }

  std::vector<std::string> learned(new_size - offset);
  for (auto& [index, token] : placed) {
    if (index >= new_size) {
      Incompatible("token '" + token + "' must keep index " + std::to_string(index) +
                   " but the new vocabulary has only " + std::to_string(new_size) + " entries");
    }
    learned[index - offset] = std::move(token);
  }
  std::sort(entries.begin(), entries.end(),
            [](const MigrationEntry& a, const MigrationEntry& b) { return a.new_index < b.new_index; });

  std::vector<MergeRule> merges(new_vocab.merges().begin(), new_vocab.merges().end());
  Vocabulary reindexed(std::vector<std::string>(new_vocab.specials().begin(),
                                                new_vocab.specials().end()),
                       std::move(learned), std::move(merges), new_vocab.metadata(),
                       new_vocab.word_start_marker());

  MigrationPlan plan;
  plan.old_size = old_size;
  plan.new_size = new_size;
  plan.old_fingerprint = old_vocab.fingerprint();
  plan.new_fingerprint = reindexed.fingerprint();
  plan.entries = std::move(entries);
  plan.checksum = plan.ComputeChecksum();
  return SubstitutionResult{std::move(reindexed), std::move(plan)};
}

EmbeddingStore ApplyMigration(const MigrationPlan& plan, const EmbeddingStore& old_store,
                              uint64_t seed) {
  if (old_store.rows() != plan.old_size) {
    throw Error(ErrorCode::kInvalidInput,
                "embedding size mismatch: store has " + std::to_string(old_store.rows()) +
                    " rows, plan expects " + std::to_string(plan.old_size));
  }
  if (old_store.vocab_fingerprint() != plan.old_fingerprint) {
    throw Error(ErrorCode::kInvalidInput,
                "embedding store belongs to a different vocabulary than the plan's old side");
  }
  if (plan.entries.size() != plan.new_size) {
    throw Error(ErrorCode::kInvalidInput, "migration plan entry count differs from new_size");
  }
  const uint64_t dim = old_store.dim();
  for (double v : old_store.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kDomain, "non-finite value in embedding store");
  }

  std::vector<double> mean(dim, 0.0);
  double sigma = 1.0;
  if (plan.count(EntryKind::kFresh) > 0) {
    if (old_store.rows() > 0) {
      for (uint64_t r = 0; r < old_store.rows(); ++r) {
        const auto row = old_store.row(r);
        for (uint64_t c = 0; c < dim; ++c) mean[c] += row[c];
      }
      for (double& m : mean) m /= static_cast<double>(old_store.rows());
      double total = 0;
      for (double v : old_store.values()) total += v;
      const double grand = total / static_cast<double>(old_store.values().size());
      double squares = 0;
      for (double v : old_store.values()) squares += (v - grand) * (v - grand);
      const double sd = std::sqrt(squares / static_cast<double>(old_store.values().size()));
      if (sd > 0) sigma = sd;
    }
  }

  std::vector<double> values(plan.new_size * dim);
  std::vector<bool> seen(plan.new_size, false);
  for (const auto& e : plan.entries) {
    if (e.new_index >= plan.new_size || seen[e.new_index]) {
      throw Error(ErrorCode::kInvalidInput, "migration plan does not cover each new index once");
    }
    seen[e.new_index] = true;
    double* out = values.data() + e.new_index * dim;
    if (e.kind != EntryKind::kFresh) {
      const auto row = old_store.row(e.old_index);
      std::copy(row.begin(), row.end(), out);
    } else if (e.init == InitRule::kMean) {
      std::copy(mean.begin(), mean.end(), out);
    } else {
      auto engine = MakeStream(seed, e.new_index);
      for (uint64_t c = 0; c < dim; ++c) out[c] = sigma * StandardNormal(engine);
    }
  }
  return EmbeddingStore(plan.new_size, dim, plan.new_fingerprint, std::move(values));
}

bool SubstitutionDiagnostics::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const DiagnosticCheck& c) { return c.passed; });
}

const DiagnosticCheck* SubstitutionDiagnostics::Find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> SubstitutionDiagnostics::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.failure);
  }
  return out;
}

Json SubstitutionDiagnostics::ToJson() const {
  Json list = Json::array();
  for (const auto& c : checks) {
    Json item;
    item["name"] = c.name;
    item["passed"] = c.passed;
    item["violations"] = c.violations;
    if (!c.passed) item["failure"] = c.failure;
    list.push_back(std::move(item));
  }
  Json doc;
  doc["passed"] = passed();
  doc["checks"] = std::move(list);
  return doc;
}

SubstitutionDiagnostics VerifySubstitution(const SubstitutionResult& result,
                                           const Vocabulary& old_vocab,
                                           const Vocabulary& new_vocab) {
  const Vocabulary& re = result.reindexed_vocab;
  const MigrationPlan& plan = result.plan;
  SubstitutionDiagnostics report;
  auto add = [&](std::string name, std::string failure, uint64_t violations) {
    report.checks.push_back(
        DiagnosticCheck{std::move(name), violations == 0, violations, std::move(failure)});
  };

  add("plan_sizes", "plan sizes disagree with vocabularies",
      (plan.old_size != old_vocab.size()) + (plan.new_size != new_vocab.size()) +
          (re.size() != new_vocab.size()) + (plan.entries.size() != plan.new_size));

  uint64_t missing_tokens = 0;
  for (const auto& t : new_vocab.tokens()) missing_tokens += !re.contains(t);
  for (const auto& t : re.tokens()) missing_tokens += !new_vocab.contains(t);
  add("token_set", "token set differs from new vocabulary", missing_tokens);

  add("fingerprints", "plan fingerprint mismatch",
      (plan.old_fingerprint != old_vocab.fingerprint()) +
          (plan.new_fingerprint != re.fingerprint()));
  add("checksum", "plan checksum mismatch", plan.checksum != plan.ComputeChecksum());

  std::vector<uint32_t> new_hits(plan.new_size, 0);
  uint64_t bad_new = 0;
  std::vector<uint32_t> old_hits(plan.old_size, 0);
  uint64_t out_of_range_old = 0;
  for (const auto& e : plan.entries) {
    if (e.new_index < plan.new_size) {
      ++new_hits[e.new_index];
    } else {
      ++bad_new;
    }
    if (e.kind == EntryKind::kFresh) continue;
    if (e.old_index < plan.old_size) {
      ++old_hits[e.old_index];
    } else {
      ++out_of_range_old;
    }
  }
  for (uint32_t h : new_hits) bad_new += (h != 1);
  add("new_index_coverage", "new index missing or duplicated", bad_new);
  uint64_t twice = 0;
  for (uint32_t h : old_hits) twice += (h > 1);
  add("old_index_unique", "old index referenced twice", twice);
  add("old_index_range", "old index out of range", out_of_range_old);

  // Shared tokens: same index in old and reindexed, and a reuse_shared entry
  // that maps that index onto itself.
  std::vector<const MigrationEntry*> by_new(plan.new_size, nullptr);
  for (const auto& e : plan.entries) {
    if (e.new_index < plan.new_size) by_new[e.new_index] = &e;
  }
  uint64_t moved = 0;
  for (size_t i = 0; i < old_vocab.size(); ++i) {
    const std::string& t = old_vocab.tokens()[i];
    if (!new_vocab.contains(t)) continue;
    const auto now = re.find(t);
    const MigrationEntry* e = i < by_new.size() ? by_new[i] : nullptr;
    if (!now || static_cast<size_t>(*now) != i || e == nullptr ||
        e->kind != EntryKind::kReuseShared || e->old_index != i) {
      ++moved;
    }
  }
  add("shared_index_preserved", "shared token index changed", moved);

  uint64_t bad_kind = 0;
  std::set<uint64_t> recycled;
  for (const auto& e : plan.entries) {
    if (e.kind == EntryKind::kFresh) {
      bad_kind += e.new_index < plan.old_size;
      continue;
    }
    if (e.old_index >= old_vocab.size() || e.new_index >= re.size()) {
      ++bad_kind;
      continue;
    }
    const std::string& old_token = old_vocab.tokens()[e.old_index];
    if (e.kind == EntryKind::kReuseShared) {
      bad_kind += e.old_index != e.new_index || old_token != re.tokens()[e.new_index];
    } else {
      recycled.insert(e.old_index);
      bad_kind += new_vocab.contains(old_token);  // recycled rows must be dropped tokens
    }
  }
  uint64_t dropped = 0;
  for (const auto& t : old_vocab.tokens()) dropped += !new_vocab.contains(t);
  // Every dropped row is recycled unless the vocabulary shrank.
  if (plan.new_size >= plan.old_size && recycled.size() != dropped) ++bad_kind;
  add("entry_kinds", "recycled index is not a dropped token", bad_kind);

  const uint64_t expected_fresh =
      plan.new_size > plan.old_size ? plan.new_size - plan.old_size : 0;
  const uint64_t fresh = plan.count(EntryKind::kFresh);
  add("fresh_rows", "unexpected fresh entries",
      fresh > expected_fresh ? fresh - expected_fresh : expected_fresh - fresh);
  return report;
}

}  // namespace vocab_lifecycle
