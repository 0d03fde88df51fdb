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

#include "vocab_lifecycle/random.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "vocab_lifecycle/hash.h"

namespace vocab_lifecycle {
namespace {

TEST(Streams, SameSeedAndStreamRepeat) {
  auto a = MakeStream(42, 7);
  auto b = MakeStream(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Streams, DifferentStreamsDiverge) {
  auto a = MakeStream(42, 7);
  auto b = MakeStream(42, 8);
  auto c = MakeStream(43, 7);
  const uint64_t first = a();
  EXPECT_NE(first, b());
  EXPECT_NE(first, c());
}

TEST(UniformBelow, StaysInRangeAndCoversIt) {
  auto rng = MakeStream(1);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const uint64_t v = UniformBelow(rng, 7);
    ASSERT_LT(v, 7u);
    ++seen[v];
  }
  // Binomial(7000, 1/7): mean 1000, sd ~29.
  for (int count : seen) EXPECT_NEAR(count, 1000, 150);
}

TEST(UniformUnit, HalfOpenInterval) {
  auto rng = MakeStream(2);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = UniformUnit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(StandardNormal, MomentsMatch) {
  auto rng = MakeStream(kDefaultSeed);
  const int n = 200000;
  double sum = 0;
  double squares = 0;
  for (int i = 0; i < n; ++i) {
    const double x = StandardNormal(rng);
    ASSERT_TRUE(std::isfinite(x));
    sum += x;
    squares += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(squares / n, 1.0, 0.015);
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, HexRoundTrip) {
  Sha256 h;
  h.Update("abc");
  const Sha256Digest digest = h.Finish();
  Sha256Digest back{};
  ASSERT_TRUE(FromHex(ToHex(digest), &back));
  EXPECT_EQ(back, digest);
  EXPECT_FALSE(FromHex("zz", &back));
}

TEST(Sha256, FieldsAreLengthFramed) {
  Sha256 a;
  a.AddField("ab");
  a.AddField("c");
  Sha256 b;
  b.AddField("a");
  b.AddField("bc");
  EXPECT_NE(a.FinishHex(), b.FinishHex());
}

}  // namespace
}  // namespace vocab_lifecycle
