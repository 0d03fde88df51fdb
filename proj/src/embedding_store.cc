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

#include "vocab_lifecycle/embedding_store.h"

#include <bit>
#include <cmath>
#include <cstring>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/file_io.h"
#include "vocab_lifecycle/hash.h"
#include "vocab_lifecycle/random.h"

namespace vocab_lifecycle {
namespace {

constexpr char kMagic[8] = {'V', 'L', 'E', 'M', 'B', 0, 0, 0};
constexpr size_t kHeaderSize = 8 + 4 + 4 + 8 + 8 + 32;

void PutLe(std::string* out, uint64_t value, int width) {
  for (int i = 0; i < width; ++i) out->push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

uint64_t GetInt(std::string_view bytes, size_t offset, int width, bool big_endian) {
  uint64_t value = 0;
  for (int i = 0; i < width; ++i) {
    const auto b = static_cast<uint8_t>(bytes[offset + i]);
    const int shift = big_endian ? 8 * (width - 1 - i) : 8 * i;
    value |= static_cast<uint64_t>(b) << shift;
  }
  return value;
}

[[noreturn]] void Malformed(const std::string& why) {
  throw Error(ErrorCode::kInvalidInput, "malformed embedding store: " + why);
}

}  // namespace

EmbeddingStore::EmbeddingStore(uint64_t rows, uint64_t dim, std::string vocab_fingerprint,
                               std::vector<double> values)
    : rows_(rows),
      dim_(dim),
      vocab_fingerprint_(std::move(vocab_fingerprint)),
      values_(std::move(values)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidInput, "embedding dim must be positive");
  if (values_.size() / dim_ != rows_ || values_.size() % dim_ != 0) {
    throw Error(ErrorCode::kInvalidInput, "embedding values do not match rows x dim");
  }
  Sha256Digest digest;
  if (!FromHex(vocab_fingerprint_, &digest)) {
    throw Error(ErrorCode::kInvalidInput, "embedding fingerprint is not 64 hex characters");
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kDomain, "non-finite embedding value at row " +
                                          std::to_string(i / dim_) + ", column " +
                                          std::to_string(i % dim_));
    }
  }
}

EmbeddingStore EmbeddingStore::Random(const Vocabulary& vocab, uint64_t dim, uint64_t seed) {
  std::vector<double> values;
  values.reserve(vocab.size() * dim);
  for (uint64_t r = 0; r < vocab.size(); ++r) {
    auto engine = MakeStream(seed, r);
    for (uint64_t c = 0; c < dim; ++c) values.push_back(StandardNormal(engine));
  }
  return EmbeddingStore(vocab.size(), dim, vocab.fingerprint(), std::move(values));
}

std::span<const double> EmbeddingStore::row(uint64_t index) const {
  if (index >= rows_) {
    throw Error(ErrorCode::kInvalidInput, "embedding row " + std::to_string(index) +
                                              " out of range [0, " + std::to_string(rows_) +
                                              ")");
  }
  return std::span<const double>(values_).subspan(index * dim_, dim_);
}

std::string EmbeddingStore::Serialize() const {
  std::string out;
  out.reserve(kHeaderSize + values_.size() * 8);
  out.append(kMagic, sizeof(kMagic));
  PutLe(&out, kFormatVersion, 4);
  out.push_back('L');
  out.append(3, '\0');
  PutLe(&out, rows_, 8);
  PutLe(&out, dim_, 8);
  Sha256Digest digest;
  FromHex(vocab_fingerprint_, &digest);
  out.append(reinterpret_cast<const char*>(digest.data()), digest.size());
  for (double v : values_) PutLe(&out, std::bit_cast<uint64_t>(v), 8);
  return out;
}

EmbeddingStore EmbeddingStore::Deserialize(std::string_view bytes) {
  if (bytes.size() < kHeaderSize) Malformed("truncated header");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) Malformed("bad magic");
  // The tag governs every multi-byte field, header included.
  const char tag = bytes[12];
  if (tag != 'L' && tag != 'B') Malformed("unknown endianness tag");
  const bool big = tag == 'B';
  const uint64_t version = GetInt(bytes, 8, 4, big);
  if (version != kFormatVersion) Malformed("unsupported version " + std::to_string(version));
  const uint64_t rows = GetInt(bytes, 16, 8, big);
  const uint64_t dim = GetInt(bytes, 24, 8, big);
  Sha256Digest digest;
  std::memcpy(digest.data(), bytes.data() + 32, digest.size());
  if (dim == 0) Malformed("zero dim");
  const uint64_t count = rows * dim;
  if (rows != 0 && count / rows != dim) Malformed("shape overflow");
  if ((bytes.size() - kHeaderSize) / 8 != count || (bytes.size() - kHeaderSize) % 8 != 0) {
    Malformed("value block size does not match rows x dim");
  }
  std::vector<double> values(count);
  for (uint64_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<double>(GetInt(bytes, kHeaderSize + 8 * i, 8, big));
  }
  return EmbeddingStore(rows, dim, ToHex(digest), std::move(values));
}

EmbeddingStore EmbeddingStore::Load(const std::filesystem::path& path) {
  return Deserialize(ReadFile(path));
}

void EmbeddingStore::Save(const std::filesystem::path& path) const {
  WriteFileAtomic(path, Serialize());
}

}  // namespace vocab_lifecycle
