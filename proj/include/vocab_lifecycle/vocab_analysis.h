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

// How a vocabulary changes when it is rebuilt with more languages: token
// overlap with the original and the original indices of the tokens that were
// dropped. Index order stands in for frequency rank.

#ifndef VOCAB_LIFECYCLE_VOCAB_ANALYSIS_H_
#define VOCAB_LIFECYCLE_VOCAB_ANALYSIS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vocab_lifecycle/bpe_trainer.h"
#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/vocabulary.h"

namespace vocab_lifecycle {

struct OverlapReport {
  static constexpr int kFormatVersion = 1;

  std::string base_id;
  std::string extended_id;
  uint64_t shared_count = 0;
  uint64_t base_size = 0;
  uint64_t extended_size = 0;
  std::optional<std::vector<std::string>> shared_tokens_sample;

  // shared_count / base_size
  double overlap_fraction() const;

  Json ToJson() const;
  static OverlapReport FromJson(const Json& json);
};

// Shared tokens are matched by exact string (marker included); indices are
// ignored. `sample_size` > 0 records that many shared learned tokens.
OverlapReport Overlap(const Vocabulary& base, const Vocabulary& extended,
                      size_t sample_size = 0);

struct Quartiles {
  double q1 = 0;
  double median = 0;
  double q3 = 0;
};

struct RankDisplacement {
  static constexpr int kFormatVersion = 1;

  uint64_t base_size = 0;
  std::vector<uint64_t> lost_indices;  // ascending
  // Unset when nothing was lost.
  std::optional<Quartiles> quartiles;
  // Counts over `bins` equal-width bins covering [0, base_size).
  std::vector<uint64_t> histogram;

  double bin_lower(size_t bin) const;
  double bin_upper(size_t bin) const;

  Json ToJson() const;
  static RankDisplacement FromJson(const Json& json);
  // bin,lower,upper,count
  std::string HistogramCsv() const;
  // lost_count,base_size,q1,median,q3 (empty quartile fields when undefined)
  std::string QuartilesCsv() const;
};

RankDisplacement ComputeRankDisplacement(const Vocabulary& base,
                                         const Vocabulary& extended, uint32_t bins);

// Linear interpolation between closest ranks; `sorted` must be non-empty.
double Quantile(const std::vector<uint64_t>& sorted, double q);

struct SweepSelection {
  std::string label;
  std::vector<std::string> dataset_ids;
};

struct SweepSetup {
  // Base corpora of growing language count; each must contain the previous.
  std::vector<SweepSelection> bases;
  // Datasets added on top of every base (one Table-1 column each).
  std::vector<SweepSelection> additions;
  TrainConfig config;
  uint32_t rank_bins = 40;
  // Keep every trained vocabulary in the result (memory heavy at scale).
  bool keep_vocabularies = false;
};

struct SweepCell {
  std::optional<OverlapReport> overlap;
  std::optional<RankDisplacement> displacement;
  std::string error;  // non-empty when training this cell failed
  std::shared_ptr<const Vocabulary> extended_vocab;  // only with keep_vocabularies

  bool ok() const { return overlap.has_value(); }
};

struct SweepTable {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> base_labels;
  std::vector<std::string> addition_labels;
  std::vector<SweepCell> cells;  // row-major: bases x additions
  std::vector<std::shared_ptr<const Vocabulary>> base_vocabs;  // only with keep_vocabularies

  const SweepCell& at(size_t base, size_t addition) const {
    return cells[base * addition_labels.size() + addition];
  }

  Json ToJson() const;
  static SweepTable FromJson(const Json& json);
  // Rows are base labels, columns are additions; values are fractions with
  // six decimals, "error" for failed cells.
  std::string ToCsv() const;
};

// Trains V_N per base and V_N+added per cell with identical settings. A cell
// whose training fails records the error and the sweep continues.
SweepTable OverlapSweep(const CorpusManifest& manifest, const SweepSetup& setup);

struct SweepConfigFile {
  std::filesystem::path manifest_path;
  SweepSetup setup;
};

// Reads a sweep.toml; `manifest` is resolved relative to the file.
SweepConfigFile LoadSweepConfig(const std::filesystem::path& path);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_VOCAB_ANALYSIS_H_
