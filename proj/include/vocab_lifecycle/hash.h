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

#ifndef VOCAB_LIFECYCLE_HASH_H_
#define VOCAB_LIFECYCLE_HASH_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace vocab_lifecycle {

using Sha256Digest = std::array<uint8_t, 32>;

// Incremental SHA-256. Fields fed through AddField are length-prefixed so
// that ("ab","c") and ("a","bc") hash differently.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(std::string_view bytes);
  void AddField(std::string_view field);
  void AddInteger(uint64_t value);
  Sha256Digest Finish();
  std::string FinishHex();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string Sha256Hex(std::string_view bytes);
std::string ToHex(const Sha256Digest& digest);
// Returns false when `hex` is not 64 hex digits.
bool FromHex(std::string_view hex, Sha256Digest* digest);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_HASH_H_
