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

// Dense embedding table bound to one vocabulary by fingerprint.
//
// On-disk layout (byte order of every multi-byte field set by the tag):
//   8 bytes  magic "VLEMB\0\0\0"
//   4 bytes  version (1)
//   1 byte   endianness tag, 'L' or 'B'
//   3 bytes  zero padding
//   8 bytes  rows
//   8 bytes  dim
//   32 bytes vocabulary fingerprint (raw SHA-256)
//   rows*dim IEEE-754 binary64 values, row-major
// Writers always emit 'L'; readers accept both tags.

#ifndef VOCAB_LIFECYCLE_EMBEDDING_STORE_H_
#define VOCAB_LIFECYCLE_EMBEDDING_STORE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vocab_lifecycle/vocabulary.h"

namespace vocab_lifecycle {

class EmbeddingStore {
 public:
  static constexpr uint32_t kFormatVersion = 1;

  // `vocab_fingerprint` is the 64-character hex fingerprint. Throws on a
  // shape mismatch, zero dim, or a non-finite value.
  EmbeddingStore(uint64_t rows, uint64_t dim, std::string vocab_fingerprint,
                 std::vector<double> values);

  // Rows drawn from N(0, 1) under `seed`, one stream per row.
  static EmbeddingStore Random(const Vocabulary& vocab, uint64_t dim, uint64_t seed);

  uint64_t rows() const { return rows_; }
  uint64_t dim() const { return dim_; }
  const std::string& vocab_fingerprint() const { return vocab_fingerprint_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(uint64_t index) const;

  std::string Serialize() const;
  static EmbeddingStore Deserialize(std::string_view bytes);
  static EmbeddingStore Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  bool operator==(const EmbeddingStore&) const = default;

 private:
  uint64_t rows_;
  uint64_t dim_;
  std::string vocab_fingerprint_;
  std::vector<double> values_;
};

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_EMBEDDING_STORE_H_
