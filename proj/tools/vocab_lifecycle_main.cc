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

// vocab-lifecycle: file-in, file-out front end for every library operation.
// Exit codes: 0 success, 1 validation or domain error, 2 usage error.

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "run_log.h"
#include "vocab_lifecycle/bpe_trainer.h"
#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/embedding_store.h"
#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/file_io.h"
#include "vocab_lifecycle/random.h"
#include "vocab_lifecycle/report.h"
#include "vocab_lifecycle/sampling_scheduler.h"
#include "vocab_lifecycle/segmenter.h"
#include "vocab_lifecycle/vocab_analysis.h"
#include "vocab_lifecycle/vocab_substitution.h"

namespace vocab_lifecycle::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kDefaultRunLog[] = "vocab-lifecycle-runs.jsonl";

// Bad flag combinations found after parsing; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<uint64_t> EnvInteger(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long parsed = std::strtoull(value, &end, 10);
  if (errno != 0 || *end != '\0') {
    throw UsageError(std::string(name) + " must be a non-negative integer");
  }
  return parsed;
}

// Tracks inputs and outputs so the run record can fingerprint them.
class Session {
 public:
  explicit Session(RunRecord* record) : record_(record) {}

  const fs::path& Input(const fs::path& path) {
    record_->input_fingerprints.emplace_back(path.string(), FingerprintFile(path));
    return path;
  }

  void WriteOutput(const fs::path& path, std::string_view contents) {
    WriteFileAtomic(path, contents);
    outputs_.push_back(path);
  }

  void WriteJson(const fs::path& path, const Json& doc) { WriteOutput(path, DumpJson(doc)); }

  // "-" or empty means standard output.
  void Emit(const std::string& path, std::string_view contents) {
    if (path.empty() || path == "-") {
      std::cout << contents;
      std::cout.flush();
    } else {
      WriteOutput(path, contents);
    }
  }

  void Finish() {
    for (const auto& p : outputs_) {
      record_->output_fingerprints.emplace_back(p.string(), FingerprintFile(p));
    }
  }

 private:
  RunRecord* record_;
  std::vector<fs::path> outputs_;
};

Json LoadJsonInput(Session& s, const fs::path& path) { return ReadJsonFile(s.Input(path)); }

Vocabulary LoadVocab(Session& s, const fs::path& path) {
  return Vocabulary::FromJson(LoadJsonInput(s, path));
}

CorpusManifest LoadManifest(Session& s, const fs::path& path) {
  return CorpusManifest::FromJson(LoadJsonInput(s, path));
}

std::vector<std::string> ReadInputLines(Session& s, const std::string& path) {
  if (path.empty() || path == "-") {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(std::cin, line)) lines.push_back(line);
    return lines;
  }
  return ReadLines(s.Input(path));
}

// ---------------------------------------------------------------- options --

struct Globals {
  bool json_errors = false;
  std::string run_log;
  bool no_run_log = false;
  int threads = 0;
  std::optional<uint64_t> seed;

  int ResolvedThreads() const {
    if (threads > 0) return threads;
    if (auto env = EnvInteger("VOCAB_LIFECYCLE_THREADS"); env && *env > 0) {
      return static_cast<int>(*env);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }

  uint64_t ResolvedSeed() const {
    if (seed) return *seed;
    if (auto env = EnvInteger("VOCAB_LIFECYCLE_SEED")) return *env;
    return kDefaultSeed;
  }
};

struct IngestOptions {
  std::string manifest;
  std::string language;
  std::string kind = "mono";
  std::string id;
  std::string path;
  std::string aligned;
};

struct TrainOptions {
  std::string manifest;
  std::vector<std::string> datasets;
  uint64_t size = 0;
  uint64_t min_frequency = 2;
  std::string out;
};

struct EncodeOptions {
  std::string vocab;
  std::string input;
  std::vector<std::string> text;
  std::string format = "ids";
  std::string out;
  std::string stats;
};

struct DecodeOptions {
  std::string vocab;
  std::string input;
  std::string out;
};

struct DiffOptions {
  std::string base;
  std::string extended;
  std::string out;
  size_t sample = 0;
};

struct SweepOptions {
  std::string config;
  std::string out;
  std::string json;
};

struct RankplotOptions {
  std::string base;
  std::string extended;
  uint32_t bins = 40;
  std::string out;
  std::string quartiles;
  std::string json;
};

struct SubstituteOptions {
  std::string old_vocab;
  std::string new_vocab;
  std::string out_vocab;
  std::string out_plan;
  std::string init = "mean";
};

struct MigrateOptions {
  std::string plan;
  std::string embeddings;
  std::string out;
};

struct InitEmbeddingsOptions {
  std::string vocab;
  uint64_t dim = 0;
  std::string out;
};

struct ScheduleOptions {
  std::string manifest;
  double temperature = kDefaultTemperature;
  std::string recipe;
  std::vector<std::string> new_ids;
  std::string out;
  uint64_t draw = 0;
};

struct VerifyOptions {
  std::string old_vocab;
  std::string new_vocab;
  std::string reindexed;
  std::string plan;
  std::string overlap;
  std::string old_embeddings;
  std::string new_embeddings;
  std::string manifest;
  std::vector<std::string> schedules;
  std::vector<std::string> artifacts;
  std::string out;
};

struct ReportOptions {
  std::vector<std::string> artifacts;
  std::string out_dir;
  std::string out;
};

// --------------------------------------------------------------- commands --

void RunIngest(Session& s, const IngestOptions& o) {
  const fs::path manifest_path = o.manifest;
  // Serializes concurrent ingests into the same manifest.
  FileLock lock(manifest_path);
  CorpusManifest manifest;
  if (fs::exists(manifest_path)) {
    manifest = LoadManifest(s, manifest_path);
  } else {
    manifest.created_at = CurrentTimestampUtc();
  }
  CorpusStore store(std::move(manifest));
  std::optional<fs::path> aligned;
  if (!o.aligned.empty()) aligned = s.Input(o.aligned);
  std::optional<std::string> id;
  if (!o.id.empty()) id = o.id;
  const DatasetRecord record =
      store.Ingest(s.Input(o.path), o.language, ParseDatasetKind(o.kind), aligned, id);
  s.WriteJson(manifest_path, store.manifest().ToJson());
  std::cout << record.id << '\t' << record.line_count << " lines\t" << record.byte_count
            << " bytes\n";
}

void RunTrain(Session& s, const TrainOptions& o, int threads) {
  const CorpusManifest manifest = LoadManifest(s, o.manifest);
  std::vector<std::string> ids = o.datasets;
  if (ids.empty()) {
    for (const auto& d : manifest.datasets) ids.push_back(d.id);
  }
  for (const auto& id : ids) s.Input(manifest.Get(id).source_path);
  TrainConfig config;
  config.target_size = o.size;
  config.min_pair_frequency = o.min_frequency;
  config.threads = threads;
  const Vocabulary vocab = Train(manifest, ids, config);
  s.WriteJson(o.out, vocab.ToJson());
  std::cout << "vocabulary " << vocab.fingerprint().substr(0, 12) << ": " << vocab.size()
            << " tokens, " << vocab.merges().size() << " merges\n";
}

void RunEncode(Session& s, const EncodeOptions& o) {
  const Vocabulary vocab = LoadVocab(s, o.vocab);
  std::vector<std::string> lines;
  if (!o.text.empty()) {
    if (!o.input.empty()) throw UsageError("give either --input or text arguments, not both");
    lines = o.text;
  } else {
    lines = ReadInputLines(s, o.input);
  }
  std::ostringstream out;
  if (o.format == "json") {
    Json doc;
    doc["format_version"] = 1;
    doc["kind"] = "token_sequences";
    doc["vocab_fingerprint"] = vocab.fingerprint();
    Json seqs = Json::array();
    for (const auto& line : lines) seqs.push_back(Encode(vocab, line).ids);
    doc["sequences"] = std::move(seqs);
    StampContentHash(&doc);
    out << DumpJson(doc);
  } else {
    for (const auto& line : lines) {
      const TokenIdSequence seq = Encode(vocab, line);
      if (o.format == "pieces") {
        const auto pieces = ToPieces(vocab, seq.ids);
        for (size_t i = 0; i < pieces.size(); ++i) out << (i ? " " : "") << pieces[i];
      } else {
        for (size_t i = 0; i < seq.ids.size(); ++i) out << (i ? " " : "") << seq.ids[i];
      }
      out << '\n';
    }
  }
  s.Emit(o.out, out.str());
  if (!o.stats.empty()) s.WriteJson(o.stats, ComputeEncodeStats(vocab, lines).ToJson());
}

void RunDecode(Session& s, const DecodeOptions& o) {
  const Vocabulary vocab = LoadVocab(s, o.vocab);
  std::vector<TokenIdSequence> sequences;
  std::string text;
  if (o.input.empty() || o.input == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  } else {
    text = ReadFile(s.Input(o.input));
  }
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const Json doc = ParseJson(text, "token sequences");
    try {
      const std::string fingerprint = doc.at("vocab_fingerprint").get<std::string>();
      for (const auto& ids : doc.at("sequences")) {
        sequences.push_back({ids.get<std::vector<TokenId>>(), fingerprint});
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidInput, std::string("malformed token sequences: ") + e.what());
    }
  } else {
    // Plain id lines carry no fingerprint; they are taken to match --vocab.
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      TokenIdSequence seq{{}, vocab.fingerprint()};
      std::istringstream fields(line);
      std::string field;
      while (fields >> field) {
        try {
          size_t used = 0;
          const long long value = std::stoll(field, &used);
          if (used != field.size()) throw std::invalid_argument(field);
          if (value < INT32_MIN || value > INT32_MAX) throw std::out_of_range(field);
          seq.ids.push_back(static_cast<TokenId>(value));
        } catch (const std::logic_error&) {
          throw Error(ErrorCode::kInvalidInput, "not a token id: '" + field + "'");
        }
      }
      sequences.push_back(std::move(seq));
    }
  }
  std::string out;
  for (const auto& seq : sequences) {
    out += Decode(vocab, seq);
    out += '\n';
  }
  s.Emit(o.out, out);
}

void RunDiff(Session& s, const DiffOptions& o) {
  const Vocabulary base = LoadVocab(s, o.base);
  const Vocabulary extended = LoadVocab(s, o.extended);
  Json doc = Overlap(base, extended, o.sample).ToJson();
  StampContentHash(&doc);
  s.Emit(o.out, DumpJson(doc));
}

void RunSweep(Session& s, const SweepOptions& o, const std::optional<int>& threads) {
  SweepConfigFile config = LoadSweepConfig(s.Input(o.config));
  if (threads) config.setup.config.threads = *threads;
  const CorpusManifest manifest = LoadManifest(s, config.manifest_path);
  const SweepTable table = OverlapSweep(manifest, config.setup);
  s.Emit(o.out, table.ToCsv());
  if (!o.json.empty()) s.WriteJson(o.json, table.ToJson());
  size_t failed = 0;
  for (const auto& cell : table.cells) failed += !cell.ok();
  if (failed > 0) std::cerr << failed << " sweep cell(s) failed; see the table\n";
}

void RunRankplot(Session& s, const RankplotOptions& o) {
  const Vocabulary base = LoadVocab(s, o.base);
  const Vocabulary extended = LoadVocab(s, o.extended);
  const RankDisplacement d = ComputeRankDisplacement(base, extended, o.bins);
  s.Emit(o.out, d.HistogramCsv());
  if (!o.quartiles.empty()) s.WriteOutput(o.quartiles, d.QuartilesCsv());
  if (!o.json.empty()) {
    Json doc = d.ToJson();
    StampContentHash(&doc);
    s.WriteJson(o.json, doc);
  }
}

void RunSubstitute(Session& s, const SubstituteOptions& o) {
  const Vocabulary old_vocab = LoadVocab(s, o.old_vocab);
  const Vocabulary new_vocab = LoadVocab(s, o.new_vocab);
  const SubstitutionResult result =
      PlanSubstitution(old_vocab, new_vocab, ParseInitRule(o.init));
  const SubstitutionDiagnostics diag = VerifySubstitution(result, old_vocab, new_vocab);
  if (!diag.passed()) {
    throw Error(ErrorCode::kDomain, "substitution failed its own checks: " + diag.ToJson().dump());
  }
  s.WriteJson(o.out_vocab, result.reindexed_vocab.ToJson());
  s.WriteJson(o.out_plan, result.plan.ToJson());
  std::cout << "shared " << result.plan.count(EntryKind::kReuseShared) << ", recycled "
            << result.plan.count(EntryKind::kReuseRecycled) << ", fresh "
            << result.plan.count(EntryKind::kFresh) << '\n';
}

void RunMigrate(Session& s, const MigrateOptions& o, uint64_t seed) {
  const MigrationPlan plan = MigrationPlan::FromJson(LoadJsonInput(s, o.plan));
  const EmbeddingStore old_store = EmbeddingStore::Load(s.Input(o.embeddings));
  s.WriteOutput(o.out, ApplyMigration(plan, old_store, seed).Serialize());
}

void RunInitEmbeddings(Session& s, const InitEmbeddingsOptions& o, uint64_t seed) {
  const Vocabulary vocab = LoadVocab(s, o.vocab);
  s.WriteOutput(o.out, EmbeddingStore::Random(vocab, o.dim, seed).Serialize());
}

void RunScheduleBase(Session& s, const ScheduleOptions& o, uint64_t seed) {
  const CorpusManifest manifest = LoadManifest(s, o.manifest);
  const SamplingSchedule schedule = BaseSchedule(manifest, o.temperature);
  Json doc = schedule.ToJson();
  if (o.draw > 0) {
    doc.erase("content_hash");
    Json counts = Json::object();
    for (const auto& [id, c] : Draw(schedule, o.draw, seed)) counts[id] = c;
    doc["draw"] = {{"n", o.draw}, {"seed", seed}, {"counts", counts}};
    StampContentHash(&doc);
  }
  s.Emit(o.out, DumpJson(doc));
}

void RunScheduleAdapt(Session& s, const ScheduleOptions& o) {
  const CorpusManifest manifest = LoadManifest(s, o.manifest);
  std::vector<std::string> mono;
  std::vector<std::string> parallel;
  for (const auto& id : o.new_ids) {
    (manifest.Get(id).kind == DatasetKind::kParallel ? parallel : mono).push_back(id);
  }
  auto expect = [&](size_t m, size_t p, const char* shape) {
    if (mono.size() != m || parallel.size() != p) {
      throw UsageError("recipe " + o.recipe + " needs --new with " + shape);
    }
  };
  AdaptationPlan plan;
  if (o.recipe == "mono") {
    expect(1, 0, "one monolingual dataset");
    plan = AdaptMonolingual(manifest, mono[0], o.temperature);
  } else if (o.recipe == "mono-bt") {
    expect(1, 1, "one monolingual and one pseudo-parallel dataset");
    plan = AdaptMonolingualBacktranslation(manifest, mono[0], parallel[0], o.temperature);
  } else if (o.recipe == "mono-parallel") {
    expect(1, 1, "one monolingual and one parallel dataset");
    plan = AdaptMonoParallel(manifest, mono[0], parallel[0], o.temperature);
  } else {
    expect(4, 4, "four monolingual and four parallel datasets");
    plan = AdaptFourLanguages(manifest, mono, parallel, o.temperature);
  }
  s.Emit(o.out, DumpJson(plan.ToJson()));
}

// A named pass/fail line of the verify report.
struct VerifyLine {
  std::string name;
  bool passed;
  std::string detail;
};

void RunVerify(Session& s, const VerifyOptions& o) {
  std::vector<VerifyLine> lines;
  auto add = [&](std::string name, bool passed, std::string detail = {}) {
    lines.push_back({std::move(name), passed, std::move(detail)});
  };

  std::vector<std::string> json_files = o.artifacts;
  for (const std::string* p : {&o.old_vocab, &o.new_vocab, &o.reindexed, &o.plan, &o.overlap,
                               &o.manifest}) {
    if (!p->empty()) json_files.push_back(*p);
  }
  for (const auto& p : o.schedules) json_files.push_back(p);
  for (const auto& file : json_files) {
    const Json doc = LoadJsonInput(s, file);
    add("content hash " + file, doc.contains("content_hash") && ContentHashMatches(doc));
  }

  // Registered files must still have the recorded shape.
  if (!o.manifest.empty()) {
    for (const auto& r : CorpusManifest::Load(o.manifest).datasets) {
      std::string detail;
      try {
        FileStats stats = ScanFile(r.source_path);
        uint64_t bytes = stats.byte_count;
        if (r.aligned_path) {
          const FileStats other = ScanFile(*r.aligned_path);
          if (other.line_count != stats.line_count) detail = "aligned side is misaligned";
          bytes += other.byte_count;
        }
        if (detail.empty() && (stats.line_count != r.line_count || bytes != r.byte_count)) {
          detail = std::to_string(stats.line_count) + " lines, " + std::to_string(bytes) +
                   " bytes; manifest has " + std::to_string(r.line_count) + ", " +
                   std::to_string(r.byte_count);
        }
      } catch (const Error& e) {
        detail = e.what();
      }
      add("dataset unchanged " + r.id, detail.empty(), detail);
    }
  }

  std::optional<Vocabulary> old_vocab;
  std::optional<Vocabulary> new_vocab;
  std::optional<Vocabulary> reindexed;
  std::optional<MigrationPlan> plan;
  if (!o.old_vocab.empty()) old_vocab = Vocabulary::Load(o.old_vocab);
  if (!o.new_vocab.empty()) new_vocab = Vocabulary::Load(o.new_vocab);
  if (!o.reindexed.empty()) reindexed = Vocabulary::Load(o.reindexed);
  if (!o.plan.empty()) plan = MigrationPlan::Load(o.plan);

  if (old_vocab && new_vocab && reindexed && plan) {
    const SubstitutionResult result{*reindexed, *plan};
    const SubstitutionDiagnostics diag = VerifySubstitution(result, *old_vocab, *new_vocab);
    for (const auto& c : diag.checks) {
      add("substitution " + c.name, c.passed,
          c.passed ? "" : c.failure + " (" + std::to_string(c.violations) + ")");
    }
    InitRule rule = InitRule::kMean;
    for (const auto& e : plan->entries) {
      if (e.kind == EntryKind::kFresh) rule = e.init;
    }
    bool reproducible = false;
    try {
      const SubstitutionResult again = PlanSubstitution(*old_vocab, *new_vocab, rule);
      reproducible = again.plan == *plan &&
                     again.reindexed_vocab.fingerprint() == reindexed->fingerprint();
    } catch (const Error&) {
    }
    add("substitution reproducible", reproducible);
  }

  if (!o.overlap.empty() && plan) {
    const OverlapReport report = OverlapReport::FromJson(ReadJsonFile(o.overlap));
    add("overlap shared_count equals reuse_shared entries",
        report.shared_count == plan->count(EntryKind::kReuseShared),
        std::to_string(report.shared_count) + " vs " +
            std::to_string(plan->count(EntryKind::kReuseShared)));
    add("overlap base matches plan old side", report.base_id == plan->old_fingerprint);
  }

  std::optional<EmbeddingStore> old_store;
  std::optional<EmbeddingStore> new_store;
  if (!o.old_embeddings.empty()) old_store = EmbeddingStore::Load(s.Input(o.old_embeddings));
  if (!o.new_embeddings.empty()) new_store = EmbeddingStore::Load(s.Input(o.new_embeddings));
  if (old_store && old_vocab) {
    add("old embeddings bound to old vocabulary",
        old_store->vocab_fingerprint() == old_vocab->fingerprint() &&
            old_store->rows() == old_vocab->size());
  }
  if (new_store && reindexed) {
    add("new embeddings bound to reindexed vocabulary",
        new_store->vocab_fingerprint() == reindexed->fingerprint() &&
            new_store->rows() == reindexed->size());
  }
  if (old_store && new_store && plan) {
    uint64_t mismatched = 0;
    bool shapes = new_store->rows() == plan->new_size && old_store->rows() == plan->old_size &&
                  new_store->dim() == old_store->dim();
    if (shapes) {
      for (const auto& e : plan->entries) {
        if (e.kind == EntryKind::kFresh) continue;
        const auto a = old_store->row(e.old_index);
        const auto b = new_store->row(e.new_index);
        if (std::memcmp(a.data(), b.data(), a.size_bytes()) != 0) ++mismatched;
      }
    }
    add("reused embedding rows copied bitwise", shapes && mismatched == 0,
        std::to_string(mismatched) + " mismatched rows");
  }

  if (!o.schedules.empty()) {
    std::optional<CorpusManifest> manifest;
    if (!o.manifest.empty()) manifest = CorpusManifest::Load(o.manifest);
    for (const auto& file : o.schedules) {
      const Json doc = ReadJsonFile(file);
      std::vector<SamplingSchedule> phases;
      if (doc.value("kind", "") == "adaptation_plan") {
        for (auto& p : AdaptationPlan::FromJson(doc).phases) phases.push_back(p.schedule);
      } else {
        phases.push_back(SamplingSchedule::FromJson(doc));
      }
      for (size_t i = 0; i < phases.size(); ++i) {
        const auto& sched = phases[i];
        bool in_range = true;
        bool known = true;
        for (const auto& [id, p] : sched.probabilities) {
          in_range = in_range && p >= 0 && p <= 1;
          if (manifest) known = known && manifest->Find(id) != nullptr;
        }
        const std::string label = file + " phase " + std::to_string(i + 1);
        add("schedule sums to 1 " + label, std::fabs(sched.sum() - 1.0) <= 1e-12);
        add("schedule entries in [0,1] " + label, in_range);
        if (manifest) add("schedule datasets in manifest " + label, known);
      }
    }
  }

  if (lines.empty()) throw UsageError("verify: nothing to check; pass artifacts or flags");
  Json doc;
  bool all = true;
  Json checks = Json::array();
  for (const auto& l : lines) {
    all = all && l.passed;
    Json item = {{"name", l.name}, {"passed", l.passed}};
    if (!l.detail.empty()) item["detail"] = l.detail;
    checks.push_back(std::move(item));
  }
  doc["passed"] = all;
  doc["checks"] = std::move(checks);
  s.Emit(o.out, DumpJson(doc));
  for (const auto& l : lines) {
    std::cerr << (l.passed ? "[ok]   " : "[FAIL] ") << l.name
              << (l.detail.empty() ? "" : " - " + l.detail) << '\n';
  }
  if (!all) throw Error(ErrorCode::kDomain, "verification failed");
}

void RunReport(Session& s, const ReportOptions& o) {
  std::vector<NamedArtifact> artifacts;
  for (const auto& file : o.artifacts) {
    artifacts.push_back({fs::path(file).filename().string(), LoadJsonInput(s, file)});
  }
  const ReportBundle bundle = BuildReport(artifacts);
  s.Emit(o.out, bundle.summary);
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    for (const auto& [name, csv] : bundle.csv_files) s.WriteOutput(fs::path(o.out_dir) / name, csv);
  }
}

// ------------------------------------------------------------------ main --

void PrintError(bool as_json, const std::string& code, const std::string& message) {
  if (as_json) {
    Json doc = {{"error", {{"code", code}, {"message", message}}}};
    std::cerr << doc.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  } else {
    std::cerr << "error (" << code << "): " << message << '\n';
  }
}

int Main(int argc, char** argv) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Vocabulary lifecycle tools for continual multilingual training.",
               "vocab-lifecycle"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Environment: VOCAB_LIFECYCLE_SEED (default seed), VOCAB_LIFECYCLE_THREADS (workers).\n"
      "Exit codes: 0 success, 1 validation or domain error, 2 usage error.");

  Globals g;
  app.add_flag("--json-errors", g.json_errors, "Print errors as JSON on stderr");
  app.add_option("--run-log", g.run_log, "Append-only JSONL run log")
      ->default_str(kDefaultRunLog);
  app.add_flag("--no-run-log", g.no_run_log, "Do not append a run record");
  app.add_option("--threads", g.threads, "Worker threads (outputs do not depend on this)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed (default 20210601)");

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Register a text corpus in a manifest");
  c_ingest->add_option("--manifest", ingest.manifest, "Manifest JSON (created if missing)")
      ->required();
  c_ingest->add_option("--lang", ingest.language, "Language code")->required();
  c_ingest->add_option("--kind", ingest.kind, "mono or parallel")
      ->check(CLI::IsMember({"mono", "monolingual", "parallel"}));
  c_ingest->add_option("--id", ingest.id, "Dataset id (default <lang>.<kind>)");
  c_ingest->add_option("path", ingest.path, "Newline-delimited UTF-8 text")
      ->required()
      ->check(CLI::ExistingFile);
  c_ingest->add_option("aligned", ingest.aligned, "Other side of a parallel corpus")
      ->check(CLI::ExistingFile);
  c_ingest->footer("Example: vocab-lifecycle ingest --manifest m.json --lang bn --kind mono bn.txt");

  TrainOptions train;
  auto* c_train = app.add_subcommand("train-vocab", "Train a byte-fallback BPE vocabulary");
  c_train->add_option("--manifest", train.manifest)->required()->check(CLI::ExistingFile);
  c_train->add_option("--datasets", train.datasets, "Dataset ids (default: all)");
  c_train->add_option("--size", train.size, "Target vocabulary size")->required();
  c_train->add_option("--min-frequency", train.min_frequency, "Stop below this pair count");
  c_train->add_option("--out", train.out)->required();
  c_train->footer(
      "Example: vocab-lifecycle train-vocab --manifest m.json --datasets en.mono fr.mono "
      "--size 2000 --out v24.json");

  EncodeOptions encode;
  auto* c_encode = app.add_subcommand("encode", "Segment text into token ids");
  c_encode->add_option("--vocab", encode.vocab)->required()->check(CLI::ExistingFile);
  c_encode->add_option("--input", encode.input, "Text file, one segment per line (default stdin)");
  c_encode->add_option("text", encode.text, "Literal text segments");
  c_encode->add_option("--format", encode.format, "ids, pieces or json")
      ->check(CLI::IsMember({"ids", "pieces", "json"}));
  c_encode->add_option("--out", encode.out, "Output file (default stdout)");
  c_encode->add_option("--stats", encode.stats, "Write encode statistics JSON here");
  c_encode->footer("Example: vocab-lifecycle encode --vocab v.json --format pieces \"hello world\"");

  DecodeOptions decode;
  auto* c_decode = app.add_subcommand("decode", "Turn token ids back into text");
  c_decode->add_option("--vocab", decode.vocab)->required()->check(CLI::ExistingFile);
  c_decode->add_option("--input", decode.input,
                       "Id lines or encode --format json output (default stdin)");
  c_decode->add_option("--out", decode.out, "Output file (default stdout)");
  c_decode->footer("Example: vocab-lifecycle decode --vocab v.json --input ids.txt");

  DiffOptions diff;
  auto* c_diff = app.add_subcommand("diff", "Token overlap between two vocabularies");
  c_diff->add_option("--base", diff.base)->required()->check(CLI::ExistingFile);
  c_diff->add_option("--extended", diff.extended)->required()->check(CLI::ExistingFile);
  c_diff->add_option("--out", diff.out, "Report JSON (default stdout)");
  c_diff->add_option("--sample", diff.sample, "Include this many shared tokens");
  c_diff->footer("Example: vocab-lifecycle diff --base v24.json --extended v25.json --out report.json");

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Overlap table over growing base corpora");
  c_sweep->add_option("--config", sweep.config, "sweep.toml")->required()->check(CLI::ExistingFile);
  c_sweep->add_option("--out", sweep.out, "CSV table (default stdout)");
  c_sweep->add_option("--json", sweep.json, "Also write the full table as JSON");
  c_sweep->footer("Example: vocab-lifecycle sweep --config sweep.toml --out table.csv");

  RankplotOptions rank;
  auto* c_rank = app.add_subcommand("rankplot", "Histogram of the base indices of lost tokens");
  c_rank->add_option("--base", rank.base)->required()->check(CLI::ExistingFile);
  c_rank->add_option("--extended", rank.extended)->required()->check(CLI::ExistingFile);
  c_rank->add_option("--bins", rank.bins, "Equal-width bins over the base size")
      ->check(CLI::PositiveNumber);
  c_rank->add_option("--out", rank.out, "Histogram CSV bin,lower,upper,count (default stdout)");
  c_rank->add_option("--quartiles", rank.quartiles, "CSV lost_count,base_size,q1,median,q3");
  c_rank->add_option("--json", rank.json, "Full report JSON");
  c_rank->footer("Example: vocab-lifecycle rankplot --base a.json --extended b.json --bins 40 --out hist.csv");

  SubstituteOptions subst;
  auto* c_subst = app.add_subcommand("substitute", "Index-preserving vocabulary substitution");
  c_subst->add_option("--old", subst.old_vocab)->required()->check(CLI::ExistingFile);
  c_subst->add_option("--new", subst.new_vocab)->required()->check(CLI::ExistingFile);
  c_subst->add_option("--out-vocab", subst.out_vocab, "Reindexed new vocabulary")->required();
  c_subst->add_option("--out-plan", subst.out_plan, "Migration plan JSON")->required();
  c_subst->add_option("--init", subst.init, "Fresh-row init rule: mean or gaussian")
      ->check(CLI::IsMember({"mean", "gaussian"}));
  c_subst->footer(
      "Example: vocab-lifecycle substitute --old a.json --new b.json --out-vocab c.json "
      "--out-plan plan.json");

  MigrateOptions migrate;
  auto* c_migrate = app.add_subcommand("migrate", "Apply a migration plan to an embedding table");
  c_migrate->add_option("--plan", migrate.plan)->required()->check(CLI::ExistingFile);
  c_migrate->add_option("--embeddings", migrate.embeddings)->required()->check(CLI::ExistingFile);
  c_migrate->add_option("--out", migrate.out)->required();
  c_migrate->footer(
      "Example: vocab-lifecycle migrate --plan plan.json --embeddings old.bin --out new.bin --seed 7");

  InitEmbeddingsOptions init_emb;
  auto* c_init = app.add_subcommand("init-embeddings", "Seeded N(0,1) embedding table for a vocabulary");
  c_init->add_option("--vocab", init_emb.vocab)->required()->check(CLI::ExistingFile);
  c_init->add_option("--dim", init_emb.dim)->required()->check(CLI::PositiveNumber);
  c_init->add_option("--out", init_emb.out)->required();
  c_init->footer("Example: vocab-lifecycle init-embeddings --vocab a.json --dim 16 --out old.bin");

  ScheduleOptions sched;
  auto* c_sched = app.add_subcommand("schedule", "Data-sampling schedules");
  c_sched->require_subcommand(1);
  auto* c_base = c_sched->add_subcommand("base", "Equal source split, temperature within source");
  c_base->add_option("--manifest", sched.manifest)->required()->check(CLI::ExistingFile);
  c_base->add_option("-T,--temperature", sched.temperature);
  c_base->add_option("--out", sched.out, "Schedule JSON (default stdout)");
  c_base->add_option("--draw", sched.draw, "Also draw this many samples (uses --seed)");
  c_base->footer("Example: vocab-lifecycle schedule base --manifest m.json -T 5");
  auto* c_adapt = c_sched->add_subcommand("adapt", "Adaptation plan for newly added data");
  c_adapt->add_option("--recipe", sched.recipe)
      ->required()
      ->check(CLI::IsMember({"mono", "mono-bt", "mono-parallel", "four"}));
  c_adapt->add_option("--manifest", sched.manifest)->required()->check(CLI::ExistingFile);
  c_adapt->add_option("--new", sched.new_ids, "New dataset ids; kinds are read from the manifest")
      ->required();
  c_adapt->add_option("-T,--temperature", sched.temperature);
  c_adapt->add_option("--out", sched.out, "Plan JSON (default stdout)");
  c_adapt->footer(
      "Example: vocab-lifecycle schedule adapt --recipe mono-parallel --manifest m.json "
      "--new bn.mono bn.parallel");

  VerifyOptions verify;
  auto* c_verify = app.add_subcommand("verify", "Cross-validate pipeline artifacts");
  c_verify->add_option("--old", verify.old_vocab)->check(CLI::ExistingFile);
  c_verify->add_option("--new", verify.new_vocab)->check(CLI::ExistingFile);
  c_verify->add_option("--reindexed", verify.reindexed)->check(CLI::ExistingFile);
  c_verify->add_option("--plan", verify.plan)->check(CLI::ExistingFile);
  c_verify->add_option("--overlap", verify.overlap, "diff report of old vs new")
      ->check(CLI::ExistingFile);
  c_verify->add_option("--old-embeddings", verify.old_embeddings)->check(CLI::ExistingFile);
  c_verify->add_option("--new-embeddings", verify.new_embeddings)->check(CLI::ExistingFile);
  c_verify->add_option("--manifest", verify.manifest)->check(CLI::ExistingFile);
  c_verify->add_option("--schedule", verify.schedules, "Schedule or plan JSON")
      ->check(CLI::ExistingFile);
  c_verify->add_option("artifacts", verify.artifacts, "Any JSON artifacts (hash check)")
      ->check(CLI::ExistingFile);
  c_verify->add_option("--out", verify.out, "Report JSON (default stdout)");
  c_verify->footer(
      "Example: vocab-lifecycle verify --old a.json --new b.json --reindexed c.json "
      "--plan plan.json --old-embeddings old.bin --new-embeddings new.bin");

  ReportOptions report;
  auto* c_report = app.add_subcommand("report", "Human-readable summary plus CSV bundle");
  c_report->add_option("artifacts", report.artifacts)->required()->check(CLI::ExistingFile);
  c_report->add_option("--out-dir", report.out_dir, "Directory for the CSV bundle");
  c_report->add_option("--out", report.out, "Summary text (default stdout)");
  c_report->footer("Example: vocab-lifecycle report report.json table.json --out-dir csv/");

  RunRecord record;
  for (int i = 1; i < argc; ++i) record.arguments.emplace_back(argv[i]);
  int exit_code = 0;
  bool parsed = false;
  try {
    app.parse(argc, argv);
    parsed = true;
    Session session(&record);
    const int threads = g.ResolvedThreads();
    const uint64_t seed = g.ResolvedSeed();
    std::optional<int> thread_override;
    if (g.threads > 0 || std::getenv("VOCAB_LIFECYCLE_THREADS") != nullptr) {
      thread_override = threads;
    }
    if (c_ingest->parsed()) {
      record.subcommand = "ingest";
      RunIngest(session, ingest);
    } else if (c_train->parsed()) {
      record.subcommand = "train-vocab";
      RunTrain(session, train, threads);
    } else if (c_encode->parsed()) {
      record.subcommand = "encode";
      RunEncode(session, encode);
    } else if (c_decode->parsed()) {
      record.subcommand = "decode";
      RunDecode(session, decode);
    } else if (c_diff->parsed()) {
      record.subcommand = "diff";
      RunDiff(session, diff);
    } else if (c_sweep->parsed()) {
      record.subcommand = "sweep";
      RunSweep(session, sweep, thread_override);
    } else if (c_rank->parsed()) {
      record.subcommand = "rankplot";
      RunRankplot(session, rank);
    } else if (c_subst->parsed()) {
      record.subcommand = "substitute";
      RunSubstitute(session, subst);
    } else if (c_migrate->parsed()) {
      record.subcommand = "migrate";
      RunMigrate(session, migrate, seed);
    } else if (c_init->parsed()) {
      record.subcommand = "init-embeddings";
      RunInitEmbeddings(session, init_emb, seed);
    } else if (c_base->parsed()) {
      record.subcommand = "schedule base";
      RunScheduleBase(session, sched, seed);
    } else if (c_adapt->parsed()) {
      record.subcommand = "schedule adapt";
      RunScheduleAdapt(session, sched);
    } else if (c_verify->parsed()) {
      record.subcommand = "verify";
      RunVerify(session, verify);
    } else if (c_report->parsed()) {
      record.subcommand = "report";
      RunReport(session, report);
    }
    session.Finish();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    PrintError(g.json_errors, "usage_error", e.what());
    exit_code = 2;
  } catch (const Error& e) {
    PrintError(g.json_errors, std::string(ToString(e.code())), e.what());
    exit_code = 1;
  } catch (const fs::filesystem_error& e) {
    PrintError(g.json_errors, "io_error", e.what());
    exit_code = 1;
  } catch (const std::exception& e) {
    PrintError(g.json_errors, "internal_error", e.what());
    exit_code = 1;
  }

  if (parsed && !g.no_run_log) {
    record.exit_code = exit_code;
    record.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    try {
      AppendRunRecord(g.run_log.empty() ? fs::path(kDefaultRunLog) : fs::path(g.run_log),
                      record);
    } catch (const std::exception& e) {
      PrintError(g.json_errors, "io_error", e.what());
      if (exit_code == 0) exit_code = 1;
    }
  }
  return exit_code;
}

}  // namespace
}  // namespace vocab_lifecycle::cli

int main(int argc, char** argv) { return vocab_lifecycle::cli::Main(argc, argv); }
