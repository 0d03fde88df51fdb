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

#include "run_log.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/hash.h"

namespace vocab_lifecycle::cli {
namespace {

[[noreturn]] void IoFailure(const std::string& what, const std::filesystem::path& path) {
  throw Error(ErrorCode::kIo, what + " " + path.string() + ": " + std::strerror(errno));
}

Json Fingerprints(const std::vector<std::pair<std::string, std::string>>& list) {
  Json out = Json::array();
  for (const auto& [path, hash] : list) out.push_back({{"path", path}, {"sha256", hash}});
  return out;
}

}  // namespace

Json RunRecord::ToJson() const {
  Json doc;
  doc["subcommand"] = subcommand;
  doc["arguments"] = arguments;
  doc["input_fingerprints"] = Fingerprints(input_fingerprints);
  doc["output_fingerprints"] = Fingerprints(output_fingerprints);
  doc["duration"] = duration_seconds;
  doc["exit_code"] = exit_code;
  return doc;
}

std::string FingerprintFile(const std::filesystem::path& path) {
  return Sha256Hex(ReadFile(path));
}

void AppendRunRecord(const std::filesystem::path& log, const RunRecord& record) {
  const std::string line =
      record.ToJson().dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
  const int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) IoFailure("cannot open run log", log);
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    IoFailure("cannot lock run log", log);
  }
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::flock(fd, LOCK_UN);
      ::close(fd);
      IoFailure("cannot write run log", log);
    }
    written += static_cast<size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

FileLock::FileLock(const std::filesystem::path& path) {
  const std::filesystem::path lock_path = path.string() + ".lock";
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) IoFailure("cannot open lock file", lock_path);
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    IoFailure("cannot lock", lock_path);
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace vocab_lifecycle::cli
