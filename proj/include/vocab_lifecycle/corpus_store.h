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

// Corpus ingestion, line normalization, pre-tokenization and the dataset
// manifest that the trainer and the sampling scheduler read.

#ifndef VOCAB_LIFECYCLE_CORPUS_STORE_H_
#define VOCAB_LIFECYCLE_CORPUS_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocab_lifecycle/file_io.h"

namespace vocab_lifecycle {

enum class DatasetKind { kMonolingual, kParallel };

// "mono" / "parallel", the spelling used in manifests and on the CLI.
std::string_view ToString(DatasetKind kind);
DatasetKind ParseDatasetKind(std::string_view text);

struct DatasetRecord {
  std::string id;
  std::string language;
  DatasetKind kind = DatasetKind::kMonolingual;
  // Newline-delimited records; sentence pairs for parallel data.
  uint64_t line_count = 0;
  uint64_t byte_count = 0;
  std::string source_path;
  // Other side of a parallel dataset, when ingested as two files.
  std::optional<std::string> aligned_path;

  bool operator==(const DatasetRecord&) const = default;
};

struct CorpusManifest {
  static constexpr int kFormatVersion = 1;

  std::vector<DatasetRecord> datasets;
  std::string created_at;
  int format_version = kFormatVersion;

  const DatasetRecord* Find(std::string_view id) const;
  // Throws kInvalidInput naming the missing id.
  const DatasetRecord& Get(std::string_view id) const;
  std::vector<DatasetRecord> Select(std::span<const std::string> ids) const;

  Json ToJson() const;
  static CorpusManifest FromJson(const Json& json);
  static CorpusManifest Load(const std::filesystem::path& path);

  bool operator==(const CorpusManifest&) const = default;
};

struct PreToken {
  std::string text;
  bool is_word_start = false;

  bool operator==(const PreToken&) const = default;
};

// Trims, collapses every run of Unicode whitespace to one U+0020 and replaces
// ill-formed UTF-8 with U+FFFD. Nothing else is changed (no NFC/NFKC).
std::string NormalizeLine(std::string_view text);

// Splits on whitespace; inside each chunk every decimal digit (Nd) becomes
// its own pre-token. The first pre-token of a chunk is the word start.
std::vector<PreToken> Pretokenize(std::string_view normalized);

// Reads the (sanitized) lines of the dataset's source file.
std::vector<std::string> ReadLines(const DatasetRecord& record);
std::vector<std::string> ReadLines(const std::filesystem::path& path);

// Seeded uniform sample of `count` distinct lines, returned in file order.
// Returns every line when count >= line_count.
std::vector<std::string> SampleLines(const DatasetRecord& record, uint64_t count,
                                     uint64_t seed);

// Line/byte statistics of one file; throws on unreadable or empty input.
struct FileStats {
  uint64_t line_count = 0;
  uint64_t byte_count = 0;
  uint64_t invalid_utf8_sequences = 0;
};
FileStats ScanFile(const std::filesystem::path& path);

// Owns a manifest and serializes mutation; reads may run concurrently.
class CorpusStore {
 public:
  CorpusStore();
  explicit CorpusStore(CorpusManifest manifest);

  // Registers a dataset. Re-ingesting the same (path, language, kind)
  // returns the existing record unchanged.
  DatasetRecord Ingest(const std::filesystem::path& path,
                       const std::string& language, DatasetKind kind,
                       const std::optional<std::filesystem::path>& aligned_path = {},
                       const std::optional<std::string>& id = {});

  CorpusManifest manifest() const;

 private:
  mutable std::shared_mutex mutex_;
  CorpusManifest manifest_;
};

std::string CurrentTimestampUtc();

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_CORPUS_STORE_H_
