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

#ifndef VOCAB_LIFECYCLE_RANDOM_H_
#define VOCAB_LIFECYCLE_RANDOM_H_

#include <cstdint>
#include <random>

namespace vocab_lifecycle {

// Seed used whenever the caller does not supply one.
inline constexpr uint64_t kDefaultSeed = 20210601;

// Independent, reproducible stream `stream` of generator `seed`. Only
// standard-specified components are used (seed_seq, mt19937_64), so the
// sequence is identical on every conforming platform.
std::mt19937_64 MakeStream(uint64_t seed, uint64_t stream = 0);

// Unbiased integer in [0, bound); bound must be positive.
uint64_t UniformBelow(std::mt19937_64& engine, uint64_t bound);

// Double in [0, 1) with 53 random bits.
double UniformUnit(std::mt19937_64& engine);

// Standard normal via Box-Muller.
double StandardNormal(std::mt19937_64& engine);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_RANDOM_H_
