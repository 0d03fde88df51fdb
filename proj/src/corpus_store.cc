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

#include "vocab_lifecycle/corpus_store.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>
#include <numeric>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/random.h"
#include "vocab_lifecycle/unicode.h"

namespace vocab_lifecycle {
namespace {

std::string AbsolutePath(const std::filesystem::path& path) {
  return std::filesystem::absolute(path).lexically_normal().string();
}

template <typename Fn>
void ForEachLine(std::string_view contents, Fn&& fn) {
  size_t start = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    fn(contents.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

std::string_view ToString(DatasetKind kind) {
  return kind == DatasetKind::kMonolingual ? "mono" : "parallel";
}

DatasetKind ParseDatasetKind(std::string_view text) {
  if (text == "mono" || text == "monolingual") return DatasetKind::kMonolingual;
  if (text == "parallel") return DatasetKind::kParallel;
  throw Error(ErrorCode::kInvalidInput,
              "dataset kind must be mono or parallel, got '" + std::string(text) + "'");
}

const DatasetRecord* CorpusManifest::Find(std::string_view id) const {
  for (const auto& record : datasets) {
    if (record.id == id) return &record;
  }
  return nullptr;
}

const DatasetRecord& CorpusManifest::Get(std::string_view id) const {
  const DatasetRecord* record = Find(id);
  if (record == nullptr) {
    throw Error(ErrorCode::kInvalidInput,
                "dataset '" + std::string(id) + "' is not in the manifest");
  }
  return *record;
}

std::vector<DatasetRecord> CorpusManifest::Select(
    std::span<const std::string> ids) const {
  std::vector<DatasetRecord> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(Get(id));
  return out;
}

Json CorpusManifest::ToJson() const {
  Json doc;
  doc["format_version"] = format_version;
  doc["kind"] = "corpus_manifest";
  doc["created_at"] = created_at;
  Json list = Json::array();
  for (const auto& r : datasets) {
    Json item;
    item["id"] = r.id;
    item["language"] = r.language;
    item["kind"] = std::string(ToString(r.kind));
    item["line_count"] = r.line_count;
    item["byte_count"] = r.byte_count;
    item["source_path"] = r.source_path;
    if (r.aligned_path) item["aligned_path"] = *r.aligned_path;
    list.push_back(std::move(item));
  }
  doc["datasets"] = std::move(list);
  StampContentHash(&doc);
  return doc;
}

CorpusManifest CorpusManifest::FromJson(const Json& json) {
  try {
    CorpusManifest manifest;
    manifest.format_version = json.at("format_version").get<int>();
    if (manifest.format_version != kFormatVersion) {
      throw Error(ErrorCode::kInvalidInput,
                  "unsupported manifest format_version " +
                      std::to_string(manifest.format_version));
    }
    if (json.contains("content_hash") && !ContentHashMatches(json)) {
      throw Error(ErrorCode::kInvalidInput, "manifest content hash mismatch");
    }
    manifest.created_at = json.value("created_at", std::string());
    for (const auto& item : json.at("datasets")) {
      DatasetRecord r;
      r.id = item.at("id").get<std::string>();
      r.language = item.at("language").get<std::string>();
      r.kind = ParseDatasetKind(item.at("kind").get<std::string>());
      r.line_count = item.at("line_count").get<uint64_t>();
      r.byte_count = item.at("byte_count").get<uint64_t>();
      r.source_path = item.at("source_path").get<std::string>();
      if (item.contains("aligned_path")) {
        r.aligned_path = item["aligned_path"].get<std::string>();
      }
      if (manifest.Find(r.id) != nullptr) {
        throw Error(ErrorCode::kInvalidInput, "duplicate dataset id " + r.id);
      }
      manifest.datasets.push_back(std::move(r));
    }
    return manifest;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed manifest: ") + e.what());
  }
}

CorpusManifest CorpusManifest::Load(const std::filesystem::path& path) {
  return FromJson(ReadJsonFile(path));
}

std::string NormalizeLine(std::string_view text) {
  const std::string clean = unicode::SanitizeUtf8(text);
  std::string out;
  out.reserve(clean.size());
  bool pending_space = false;
  unicode::Utf8Cursor cursor(clean);
  while (!cursor.done()) {
    size_t begin = 0;
    size_t end = 0;
    const char32_t cp = cursor.Next(&begin, &end);
    if (unicode::IsWhitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(clean, begin, end - begin);
  }
  return out;
}

std::vector<PreToken> Pretokenize(std::string_view normalized) {
  std::vector<PreToken> out;
  bool chunk_start = true;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    out.push_back(PreToken{std::move(current), chunk_start});
    current.clear();
    chunk_start = false;
  };
  unicode::Utf8Cursor cursor(normalized);
  while (!cursor.done()) {
    size_t begin = 0;
    size_t end = 0;
    const char32_t cp = cursor.Next(&begin, &end);
    if (unicode::IsWhitespace(cp)) {
      flush();
      chunk_start = true;
      continue;
    }
    if (unicode::IsDecimalDigit(cp)) {
      flush();
      current.assign(normalized.substr(begin, end - begin));
      flush();
      continue;
    }
    current.append(normalized.substr(begin, end - begin));
  }
  flush();
  return out;
}

FileStats ScanFile(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  if (contents.empty()) {
    throw Error(ErrorCode::kDomain, "empty dataset: " + path.string());
  }
  FileStats stats;
  stats.byte_count = contents.size();
  ForEachLine(contents, [&](std::string_view) { ++stats.line_count; });
  if (!unicode::IsValidUtf8(contents)) {
    unicode::Utf8Cursor cursor(contents);
    while (!cursor.done()) {
      size_t begin = 0;
      size_t end = 0;
      const char32_t cp = cursor.Next(&begin, &end);
      if (cp == unicode::kReplacementCharacter &&
          contents.compare(begin, end - begin, "\xEF\xBF\xBD") != 0) {
        ++stats.invalid_utf8_sequences;
      }
    }
  }
  return stats;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  std::vector<std::string> lines;
  ForEachLine(contents, [&](std::string_view line) {
    lines.push_back(unicode::SanitizeUtf8(line));
  });
  return lines;
}

std::vector<std::string> ReadLines(const DatasetRecord& record) {
  std::vector<std::string> lines = ReadLines(record.source_path);
  if (lines.size() != record.line_count) {
    throw Error(ErrorCode::kInvalidInput,
                "dataset " + record.id + " changed on disk: manifest has " +
                    std::to_string(record.line_count) + " lines, file has " +
                    std::to_string(lines.size()));
  }
  return lines;
}

std::vector<std::string> SampleLines(const DatasetRecord& record, uint64_t count,
                                     uint64_t seed) {
  if (count == 0) {
    throw Error(ErrorCode::kDomain, "sample count must be at least 1");
  }
  std::vector<std::string> lines = ReadLines(record);
  if (count >= lines.size()) return lines;

  // Partial Fisher-Yates over line indices.
  std::vector<uint64_t> order(lines.size());
  std::iota(order.begin(), order.end(), uint64_t{0});
  auto engine = MakeStream(seed);
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t j = i + UniformBelow(engine, order.size() - i);
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  std::sort(order.begin(), order.end());
  std::vector<std::string> out;
  out.reserve(count);
  for (uint64_t index : order) out.push_back(std::move(lines[index]));
  return out;
}

std::string CurrentTimestampUtc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

CorpusStore::CorpusStore() { manifest_.created_at = CurrentTimestampUtc(); }

CorpusStore::CorpusStore(CorpusManifest manifest) : manifest_(std::move(manifest)) {
  if (manifest_.created_at.empty()) manifest_.created_at = CurrentTimestampUtc();
}

DatasetRecord CorpusStore::Ingest(const std::filesystem::path& path,
                                  const std::string& language, DatasetKind kind,
                                  const std::optional<std::filesystem::path>& aligned_path,
                                  const std::optional<std::string>& id) {
  if (language.empty()) {
    throw Error(ErrorCode::kInvalidInput, "language tag must not be empty");
  }
  if (aligned_path && kind != DatasetKind::kParallel) {
    throw Error(ErrorCode::kInvalidInput,
                "an aligned file is only meaningful for parallel datasets");
  }
  const std::string source = AbsolutePath(path);
  std::optional<std::string> aligned;
  if (aligned_path) aligned = AbsolutePath(*aligned_path);

  {
    std::shared_lock lock(mutex_);
    for (const auto& r : manifest_.datasets) {
      if (r.source_path == source && r.language == language && r.kind == kind) {
        return r;
      }
    }
  }

  // File scanning happens outside the lock so distinct datasets ingest
  // concurrently.
  const FileStats stats = ScanFile(source);
  DatasetRecord record;
  record.language = language;
  record.kind = kind;
  record.line_count = stats.line_count;
  record.byte_count = stats.byte_count;
  record.source_path = source;
  if (aligned) {
    const FileStats other = ScanFile(*aligned);
    if (other.line_count != stats.line_count) {
      throw Error(ErrorCode::kDomain,
                  "misaligned parallel dataset: " + std::to_string(stats.line_count) +
                      " vs " + std::to_string(other.line_count) + " lines");
    }
    record.byte_count += other.byte_count;
    record.aligned_path = aligned;
  }

  std::unique_lock lock(mutex_);
  for (const auto& r : manifest_.datasets) {
    if (r.source_path == source && r.language == language && r.kind == kind) {
      return r;
    }
  }
  if (id) {
    if (id->empty()) throw Error(ErrorCode::kInvalidInput, "dataset id must not be empty");
    if (manifest_.Find(*id) != nullptr) {
      throw Error(ErrorCode::kInvalidInput, "dataset id already in use: " + *id);
    }
    record.id = *id;
  } else {
    const std::string base = language + "." + std::string(ToString(kind));
    record.id = base;
    for (int suffix = 2; manifest_.Find(record.id) != nullptr; ++suffix) {
      record.id = base + "." + std::to_string(suffix);
    }
  }
  manifest_.datasets.push_back(record);
  return record;
}

CorpusManifest CorpusStore::manifest() const {
  std::shared_lock lock(mutex_);
  return manifest_;
}

}  // namespace vocab_lifecycle
