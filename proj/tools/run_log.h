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

#ifndef VOCAB_LIFECYCLE_TOOLS_RUN_LOG_H_
#define VOCAB_LIFECYCLE_TOOLS_RUN_LOG_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vocab_lifecycle/file_io.h"

namespace vocab_lifecycle::cli {

// One line of the append-only run log.
struct RunRecord {
  std::string subcommand;
  std::vector<std::string> arguments;
  // (path, sha256 of the file bytes)
  std::vector<std::pair<std::string, std::string>> input_fingerprints;
  std::vector<std::pair<std::string, std::string>> output_fingerprints;
  double duration_seconds = 0;
  int exit_code = 0;

  Json ToJson() const;
};

// SHA-256 of a file's bytes.
std::string FingerprintFile(const std::filesystem::path& path);

// Appends one JSON line under an exclusive advisory lock on the log itself.
void AppendRunRecord(const std::filesystem::path& log, const RunRecord& record);

// Holds an exclusive advisory lock on `<path>.lock` for its lifetime.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace vocab_lifecycle::cli

#endif  // VOCAB_LIFECYCLE_TOOLS_RUN_LOG_H_
