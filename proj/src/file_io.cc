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

#include "vocab_lifecycle/file_io.h"

#include <unistd.h>

#include <fstream>
#include <sstream>
#include <system_error>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/hash.h"

namespace vocab_lifecycle {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "read failed: " + path.string());
  }
  return std::move(buffer).str();
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string());
  }
}

std::string DumpJson(const Json& document) {
  return document.dump(2, ' ', false, Json::error_handler_t::strict) + "\n";
}

Json ParseJson(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                "malformed JSON in " + what + ": " + e.what());
  }
}

Json ReadJsonFile(const std::filesystem::path& path) {
  return ParseJson(ReadFile(path), path.string());
}

std::string ComputeContentHash(const Json& document) {
  Json copy = document;
  if (copy.is_object()) copy.erase("content_hash");
  return Sha256Hex(DumpJson(copy));
}

void StampContentHash(Json* document) {
  document->erase("content_hash");
  (*document)["content_hash"] = ComputeContentHash(*document);
}

bool ContentHashMatches(const Json& document) {
  if (!document.is_object() || !document.contains("content_hash") ||
      !document["content_hash"].is_string()) {
    return false;
  }
  return document["content_hash"].get<std::string>() ==
         ComputeContentHash(document);
}

}  // namespace vocab_lifecycle
