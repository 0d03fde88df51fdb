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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "bpe_reference.h"
#include "synthetic_corpus.h"
#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/random.h"

namespace vocab_lifecycle {
namespace {

const std::string kMarker = testing::kMarker;
const std::string kFingerprint(64, 'a');

Vocabulary Make(size_t extra) {
  std::vector<std::string> learned = {kMarker};
  for (size_t i = 0; i < extra; ++i) learned.push_back("t" + std::to_string(i));
  return Vocabulary(DefaultSpecials(), learned, {}, {}, kMarker);
}

TEST(EmbeddingStore, ValidatesShapeAndValues) {
  EXPECT_NO_THROW(EmbeddingStore(2, 2, kFingerprint, {1, 2, 3, 4}));
  EXPECT_THROW(EmbeddingStore(2, 2, kFingerprint, {1, 2, 3}), Error);
  EXPECT_THROW(EmbeddingStore(1, 0, kFingerprint, {}), Error);
  EXPECT_THROW(EmbeddingStore(1, 1, "xyz", {1}), Error);
  EXPECT_THROW(EmbeddingStore(1, 1, kFingerprint, {std::nan("")}), Error);
  EXPECT_THROW(
      EmbeddingStore(1, 1, kFingerprint, {std::numeric_limits<double>::infinity()}), Error);
}

TEST(EmbeddingStore, RowsAreViews) {
  const EmbeddingStore s(2, 3, kFingerprint, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(s.row(1)[0], 4.0);
  EXPECT_EQ(s.row(1).size(), 3u);
  EXPECT_THROW(s.row(2), Error);
}

TEST(EmbeddingStore, RandomIsSeededPerRow) {
  const Vocabulary small = Make(3);
  const Vocabulary large = Make(10);
  const EmbeddingStore a = EmbeddingStore::Random(small, 4, 9);
  const EmbeddingStore b = EmbeddingStore::Random(small, 4, 9);
  const EmbeddingStore c = EmbeddingStore::Random(large, 4, 9);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rows(), small.size());
  EXPECT_EQ(a.vocab_fingerprint(), small.fingerprint());
  // One stream per row: a row does not depend on how many rows follow.
  for (uint64_t r = 0; r < a.rows(); ++r) {
    EXPECT_TRUE(std::ranges::equal(a.row(r), c.row(r)));
  }
  EXPECT_NE(a, EmbeddingStore::Random(small, 4, 10));
}

TEST(EmbeddingStore, SerializationRoundTripsBitExactly) {
  const EmbeddingStore s = EmbeddingStore::Random(Make(5), 7, 1);
  const std::string bytes = s.Serialize();
  EXPECT_EQ(bytes.size(), 64 + s.values().size() * sizeof(double));
  EXPECT_EQ(bytes.substr(0, 5), "VLEMB");
  EXPECT_EQ(bytes[12], 'L');
  EXPECT_EQ(EmbeddingStore::Deserialize(bytes), s);
}

// Byte-swaps a fixed-width field in place.
void Swap(std::string* bytes, size_t offset, size_t width) {
  std::reverse(bytes->begin() + offset, bytes->begin() + offset + width);
}

TEST(EmbeddingStore, ReadsBigEndianFiles) {
  const EmbeddingStore s(2, 2, kFingerprint, {1.5, -2.25, 3e10, 0.1});
  std::string bytes = s.Serialize();
  bytes[12] = 'B';
  Swap(&bytes, 8, 4);    // version
  Swap(&bytes, 16, 8);   // rows
  Swap(&bytes, 24, 8);   // dim
  for (size_t i = 0; i < 4; ++i) Swap(&bytes, 64 + 8 * i, 8);
  EXPECT_EQ(EmbeddingStore::Deserialize(bytes), s);
}

TEST(EmbeddingStore, RejectsCorruptFiles) {
  const std::string good = EmbeddingStore(1, 2, kFingerprint, {1, 2}).Serialize();
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_THROW(EmbeddingStore::Deserialize(bad), Error);
  bad = good;
  bad[12] = 'Q';
  EXPECT_THROW(EmbeddingStore::Deserialize(bad), Error);
  EXPECT_THROW(EmbeddingStore::Deserialize(good.substr(0, good.size() - 1)), Error);
  EXPECT_THROW(EmbeddingStore::Deserialize(good + "x"), Error);
  EXPECT_THROW(EmbeddingStore::Deserialize(good.substr(0, 20)), Error);
  bad = good;
  bad[8] = 9;  // version
  EXPECT_THROW(EmbeddingStore::Deserialize(bad), Error);
}

TEST(EmbeddingStore, SaveAndLoad) {
  const auto dir = testing::MakeTempDir("embedding-test");
  const EmbeddingStore s = EmbeddingStore::Random(Make(2), 3, 4);
  s.Save(dir / "e.bin");
  EXPECT_EQ(EmbeddingStore::Load(dir / "e.bin"), s);
  EXPECT_THROW(EmbeddingStore::Load(dir / "missing.bin"), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace vocab_lifecycle
