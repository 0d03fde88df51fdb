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

// Data-sampling distributions over the datasets of a manifest.
//
// The base schedule gives monolingual and parallel sources half the mass
// each and splits it within a source by n^(1/T). Adaptation recipes pin the
// probability of newly added datasets and rescale everything else
// proportionally, all on the flattened distribution.

#ifndef VOCAB_LIFECYCLE_SAMPLING_SCHEDULER_H_
#define VOCAB_LIFECYCLE_SAMPLING_SCHEDULER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/file_io.h"

namespace vocab_lifecycle {

inline constexpr double kDefaultTemperature = 5.0;
inline constexpr double kAdaptationLearningRate = 5e-5;

struct Provenance {
  std::string recipe;  // "base" or a recipe name
  int phase = 0;       // 1-based for adapted schedules, 0 for base

  bool operator==(const Provenance&) const = default;
};

struct SamplingSchedule {
  static constexpr int kFormatVersion = 1;

  // Manifest order.
  std::vector<std::pair<std::string, double>> probabilities;
  double temperature = kDefaultTemperature;
  Provenance provenance{"base", 0};

  // Throws when `id` is not listed.
  double at(std::string_view id) const;
  double sum() const;

  Json ProbabilitiesJson() const;
  Json ToJson() const;
  static SamplingSchedule FromJson(const Json& json);

  bool operator==(const SamplingSchedule&) const = default;
};

struct AdaptationPhase {
  SamplingSchedule schedule;
  uint64_t steps = 0;

  bool operator==(const AdaptationPhase&) const = default;
};

struct AdaptationPlan {
  static constexpr int kFormatVersion = 1;

  std::string recipe;
  std::vector<AdaptationPhase> phases;
  // Metadata for the training run; nothing here executes training.
  double learning_rate = kAdaptationLearningRate;
  bool optimizer_reset = true;

  uint64_t total_steps() const;
  Json ToJson() const;
  static AdaptationPlan FromJson(const Json& json);

  bool operator==(const AdaptationPlan&) const = default;
};

// n_i is the line count (sentence pairs for parallel data). If one source
// class is empty the other takes all the mass.
SamplingSchedule BaseSchedule(const CorpusManifest& manifest,
                              double temperature = kDefaultTemperature);

// Within-class probabilities n_i^(1/T) / sum_j n_j^(1/T).
std::vector<double> TemperatureProbabilities(std::span<const uint64_t> sizes,
                                             double temperature);

// Sets each listed entry to its fixed value and scales all remaining entries
// by (1 - sum(fixed)) / (their current sum). `guard` names the error raised
// when the fixed mass reaches 1.
SamplingSchedule OverrideAndRescale(const SamplingSchedule& base,
                                    std::span<const std::pair<std::string, double>> fixed,
                                    std::string_view guard, Provenance provenance);

// Recipe arithmetic on an already-flattened base schedule.
SamplingSchedule MonolingualRecipe(const SamplingSchedule& base, const std::string& new_mono);
SamplingSchedule BacktranslationRecipe(const SamplingSchedule& base,
                                       const std::string& new_mono,
                                       const std::string& pseudo_parallel);
SamplingSchedule MonoParallelRecipe(const SamplingSchedule& base, const std::string& new_mono,
                                    const std::string& new_parallel);
SamplingSchedule FourLanguageRecipe(const SamplingSchedule& base,
                                    std::span<const std::string> new_mono,
                                    std::span<const std::string> new_parallel);

// Full plans from a manifest that already contains the new datasets.
AdaptationPlan AdaptMonolingual(const CorpusManifest& manifest, const std::string& new_mono,
                                double temperature = kDefaultTemperature);
// Phase 1 ignores the pseudo-parallel data (listed at 0); phase 2 treats it
// as an ordinary parallel dataset.
AdaptationPlan AdaptMonolingualBacktranslation(const CorpusManifest& manifest,
                                               const std::string& new_mono,
                                               const std::string& pseudo_parallel,
                                               double temperature = kDefaultTemperature);
AdaptationPlan AdaptMonoParallel(const CorpusManifest& manifest, const std::string& new_mono,
                                 const std::string& new_parallel,
                                 double temperature = kDefaultTemperature);
AdaptationPlan AdaptFourLanguages(const CorpusManifest& manifest,
                                  std::span<const std::string> new_mono,
                                  std::span<const std::string> new_parallel,
                                  double temperature = kDefaultTemperature);

// n categorical draws; identical for identical (schedule, n, seed) whatever
// the caller's threading. Counts are listed in schedule order.
std::vector<std::pair<std::string, uint64_t>> Draw(const SamplingSchedule& schedule,
                                                   uint64_t n, uint64_t seed);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_SAMPLING_SCHEDULER_H_
