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

#ifndef VOCAB_LIFECYCLE_FILE_IO_H_
#define VOCAB_LIFECYCLE_FILE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace vocab_lifecycle {

using Json = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written artifact.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

// Canonical serialization used for every JSON artifact: two-space indent,
// insertion-ordered keys, UTF-8 passed through, trailing newline.
std::string DumpJson(const Json& document);
Json ParseJson(std::string_view text, const std::string& what);
Json ReadJsonFile(const std::filesystem::path& path);

// Artifacts carry "content_hash": SHA-256 of the canonical dump of the
// document with that key removed.
std::string ComputeContentHash(const Json& document);
void StampContentHash(Json* document);
bool ContentHashMatches(const Json& document);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_FILE_IO_H_
