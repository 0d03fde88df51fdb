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

#include "vocab_lifecycle/vocab_analysis.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "bpe_reference.h"
#include "synthetic_corpus.h"
#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/random.h"
#include "vocab_lifecycle/unicode.h"

namespace vocab_lifecycle {
namespace {

namespace fs = std::filesystem;

const std::string kMarker = testing::kMarker;
const size_t kReserved = DefaultSpecials().size() + kByteTokenCount;

Vocabulary Make(const std::vector<std::string>& learned) {
  std::vector<std::string> tokens = {kMarker};
  tokens.insert(tokens.end(), learned.begin(), learned.end());
  return Vocabulary(DefaultSpecials(), tokens, {}, {}, kMarker);
}

std::vector<std::string> Names(const std::string& prefix, int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i < to; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

TEST(Overlap, CountsSharedStringsOverBaseSize) {
  // 38 learned tokens besides the marker: base size is exactly 300.
  const Vocabulary base = Make(Names("t", 0, 38));
  auto ext_tokens = Names("t", 0, 10);
  const auto fresh = Names("u", 0, 50);
  ext_tokens.insert(ext_tokens.end(), fresh.begin(), fresh.end());
  const Vocabulary ext = Make(ext_tokens);
  ASSERT_EQ(base.size(), 300u);
  const OverlapReport r = Overlap(base, ext, 3);
  // specials + bytes + marker + t0..t9
  EXPECT_EQ(r.shared_count, kReserved + 11);
  EXPECT_DOUBLE_EQ(r.overlap_fraction(), 272.0 / 300.0);
  EXPECT_EQ(r.base_size, 300u);
  EXPECT_EQ(r.extended_size, kReserved + 61);
  EXPECT_EQ(r.base_id, base.fingerprint());
  ASSERT_TRUE(r.shared_tokens_sample.has_value());
  EXPECT_EQ(*r.shared_tokens_sample, (std::vector<std::string>{kMarker, "t0", "t1"}));
}

TEST(Overlap, IdentityIsOneAndIndexIndependent) {
  const Vocabulary a = Make({"x", "y", "z"});
  const Vocabulary b = Make({"z", "y", "x"});
  EXPECT_DOUBLE_EQ(Overlap(a, a).overlap_fraction(), 1.0);
  EXPECT_DOUBLE_EQ(Overlap(a, b).overlap_fraction(), 1.0);
  EXPECT_FALSE(Overlap(a, b).shared_tokens_sample.has_value());
}

TEST(Overlap, JsonRoundTripAndValidation) {
  const OverlapReport r = Overlap(Make({"x"}), Make({"y"}), 5);
  const Json json = r.ToJson();
  EXPECT_EQ(json.at("kind"), "overlap_report");
  const OverlapReport back = OverlapReport::FromJson(json);
  EXPECT_EQ(back.shared_count, r.shared_count);
  EXPECT_EQ(back.shared_tokens_sample, r.shared_tokens_sample);
  Json bad = json;
  bad["shared_count"] = 100000;
  EXPECT_THROW(OverlapReport::FromJson(bad), Error);
}

TEST(Quantile, LinearInterpolationBetweenOrderStatistics) {
  const std::vector<uint64_t> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(Quantile({7}, 0.5), 7.0);
  EXPECT_DOUBLE_EQ(Quantile({0, 10}, 1.0), 10.0);
}

TEST(RankDisplacement, ListsLostIndicesAndBinsThem) {
  const Vocabulary base = Make({"keep", "drop1", "drop2"});
  const Vocabulary ext = Make({"keep", "new"});
  const RankDisplacement d = ComputeRankDisplacement(base, ext, 4);
  const std::vector<uint64_t> lost = {kReserved + 2, kReserved + 3};
  EXPECT_EQ(d.lost_indices, lost);
  EXPECT_EQ(d.base_size, kReserved + 4);
  ASSERT_TRUE(d.quartiles.has_value());
  EXPECT_DOUBLE_EQ(d.quartiles->median, kReserved + 2.5);
  EXPECT_EQ(d.histogram, (std::vector<uint64_t>{0, 0, 0, 2}));
  EXPECT_DOUBLE_EQ(d.bin_lower(3), 0.75 * d.base_size);
  EXPECT_DOUBLE_EQ(d.bin_upper(3), d.base_size);
  EXPECT_THROW(ComputeRankDisplacement(base, ext, 0), Error);
}

TEST(RankDisplacement, NothingLostLeavesQuartilesUndefined) {
  const Vocabulary base = Make({"a"});
  const RankDisplacement d = ComputeRankDisplacement(base, Make({"a", "b"}), 10);
  EXPECT_TRUE(d.lost_indices.empty());
  EXPECT_FALSE(d.quartiles.has_value());
  EXPECT_EQ(d.QuartilesCsv(), "lost_count,base_size,q1,median,q3\n0," +
                                  std::to_string(base.size()) + ",,,\n");
}

TEST(RankDisplacement, CsvAndJson) {
  const RankDisplacement d = ComputeRankDisplacement(Make({"a", "b"}), Make({"a"}), 2);
  const std::string csv = d.HistogramCsv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bin,lower,upper,count");
  EXPECT_NE(csv.find("\n1,"), std::string::npos);
  const RankDisplacement back = RankDisplacement::FromJson(d.ToJson());
  EXPECT_EQ(back.lost_indices, d.lost_indices);
  EXPECT_EQ(back.histogram, d.histogram);
  EXPECT_EQ(d.ToJson().at("kind"), "rank_displacement");
}

// Random vocabulary pairs against a set-based oracle.
TEST(AnalysisProperty, AgreesWithSetArithmetic) {
  auto rng = MakeStream(17);
  const auto pool = Names("w", 0, 200);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> a;
    std::vector<std::string> b;
    for (const auto& t : pool) {
      if (UniformBelow(rng, 3) == 0) a.push_back(t);
      if (UniformBelow(rng, 3) == 0) b.push_back(t);
    }
    const Vocabulary va = Make(a);
    const Vocabulary vb = Make(b);
    const std::set<std::string> sb(vb.tokens().begin(), vb.tokens().end());
    uint64_t shared = 0;
    std::vector<uint64_t> lost;
    for (size_t i = 0; i < va.size(); ++i) {
      if (sb.contains(va.tokens()[i])) {
        ++shared;
      } else {
        lost.push_back(i);
      }
    }
    EXPECT_EQ(Overlap(va, vb).shared_count, shared);
    const RankDisplacement d = ComputeRankDisplacement(va, vb, 7);
    EXPECT_EQ(d.lost_indices, lost);
    uint64_t binned = 0;
    for (uint64_t c : d.histogram) binned += c;
    EXPECT_EQ(binned, lost.size());
    EXPECT_EQ(shared + lost.size(), va.size());
  }
}

class SweepTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::MakeTempDir("sweep-test");
    testing::CorpusShape shape;
    shape.lines = 800;
    shape.lexicon_size = 400;
    CorpusStore store;
    const auto langs = testing::BaseLanguages();
    for (int i = 0; i < 3; ++i) {
      store.Ingest(testing::WriteCorpus(dir_, langs[i], shape, 1), langs[i].code,
                   DatasetKind::kMonolingual);
    }
    const auto held = testing::HeldOutLanguages()[0];
    store.Ingest(testing::WriteCorpus(dir_, held, shape, 1), held.code,
                 DatasetKind::kMonolingual);
    manifest_ = store.manifest();
  }
  void TearDown() override { fs::remove_all(dir_); }

  SweepSetup Setup(uint64_t size) const {
    SweepSetup setup;
    setup.bases = {{"1", {"la.mono"}}, {"2", {"la.mono", "el.mono"}},
                  {"3", {"la.mono", "el.mono", "ru.mono"}}};
    setup.additions = {{"hi", {"hi.mono"}}};
    setup.config.target_size = size;
    setup.rank_bins = 10;
    return setup;
  }

  fs::path dir_;
  CorpusManifest manifest_;
};

TEST_F(SweepTest, ProducesOneCellPerPairAndMatchesDirectTraining) {
  const SweepTable table = OverlapSweep(manifest_, Setup(700));
  ASSERT_EQ(table.cells.size(), 3u);
  EXPECT_TRUE(table.base_vocabs.empty());
  for (const auto& cell : table.cells) ASSERT_TRUE(cell.ok()) << cell.error;
  // Same answer as training the two vocabularies by hand.
  TrainConfig config;
  config.target_size = 700;
  const std::vector<std::string> base_ids = {"la.mono", "el.mono"};
  const std::vector<std::string> ext_ids = {"la.mono", "el.mono", "hi.mono"};
  const Vocabulary base = Train(manifest_, base_ids, config);
  const Vocabulary ext = Train(manifest_, ext_ids, config);
  EXPECT_EQ(table.at(1, 0).overlap->shared_count, Overlap(base, ext).shared_count);
  EXPECT_EQ(table.at(1, 0).overlap->extended_id, ext.fingerprint());
}

TEST_F(SweepTest, KeepsVocabulariesOnRequest) {
  SweepSetup setup = Setup(700);
  setup.keep_vocabularies = true;
  const SweepTable table = OverlapSweep(manifest_, setup);
  ASSERT_EQ(table.base_vocabs.size(), 3u);
  ASSERT_TRUE(table.at(2, 0).extended_vocab);
  EXPECT_EQ(table.at(2, 0).overlap->extended_id, table.at(2, 0).extended_vocab->fingerprint());
  EXPECT_EQ(table.at(2, 0).overlap->base_id, table.base_vocabs[2]->fingerprint());
}

TEST_F(SweepTest, RecordsPerCellFailuresAndContinues) {
  // Large enough for every base alphabet, too small once Devanagari joins.
  SweepSetup setup = Setup(0);
  TrainConfig probe;
  probe.target_size = 100000;
  const std::vector<std::string> all = {"la.mono", "el.mono", "ru.mono"};
  const Vocabulary v = Train(manifest_, all, probe);
  size_t alphabet = 0;
  for (const auto& t : v.learned()) alphabet += unicode::CountCodePoints(t) == 1;
  setup.config.target_size = kReserved + alphabet + 1;
  setup.additions.push_back({"none", {}});
  const SweepTable table = OverlapSweep(manifest_, setup);
  EXPECT_FALSE(table.at(2, 0).ok());
  EXPECT_NE(table.at(2, 0).error.find("coverage overflow"), std::string::npos);
  EXPECT_TRUE(table.at(2, 1).ok());
  EXPECT_DOUBLE_EQ(table.at(2, 1).overlap->overlap_fraction(), 1.0);
  EXPECT_NE(table.ToCsv().find("error"), std::string::npos);
}

TEST_F(SweepTest, RejectsNonNestedBases) {
  SweepSetup setup = Setup(700);
  setup.bases = {{"a", {"la.mono"}}, {"b", {"el.mono"}}};
  EXPECT_THROW(OverlapSweep(manifest_, setup), Error);
  setup.bases.clear();
  EXPECT_THROW(OverlapSweep(manifest_, setup), Error);
}

TEST_F(SweepTest, TableSerializes) {
  const SweepTable table = OverlapSweep(manifest_, Setup(700));
  const Json json = table.ToJson();
  EXPECT_EQ(json.at("kind"), "overlap_sweep");
  const SweepTable back = SweepTable::FromJson(json);
  EXPECT_EQ(back.base_labels, table.base_labels);
  EXPECT_EQ(back.ToCsv(), table.ToCsv());
  const std::string csv = table.ToCsv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "base,hi");
  Json tampered = json;
  tampered["base_labels"][0] = "x";
  EXPECT_THROW(SweepTable::FromJson(tampered), Error);
}

TEST_F(SweepTest, LoadsTomlConfig) {
  const fs::path path = dir_ / "sweep.toml";
  std::ofstream(path) << "manifest = \"m.json\"\nvocab_size = 900\nrank_bins = 5\n"
                         "[[base]]\nlabel = \"one\"\ndatasets = [\"la.mono\"]\n"
                         "[[addition]]\ndatasets = [\"hi.mono\", \"el.mono\"]\n";
  const SweepConfigFile config = LoadSweepConfig(path);
  EXPECT_EQ(config.manifest_path, dir_ / "m.json");
  EXPECT_EQ(config.setup.config.target_size, 900u);
  EXPECT_EQ(config.setup.config.min_pair_frequency, 2u);
  EXPECT_EQ(config.setup.rank_bins, 5u);
  ASSERT_EQ(config.setup.bases.size(), 1u);
  EXPECT_EQ(config.setup.bases[0].label, "one");
  ASSERT_EQ(config.setup.additions.size(), 1u);
  EXPECT_EQ(config.setup.additions[0].label, "1");
  EXPECT_EQ(config.setup.additions[0].dataset_ids.size(), 2u);

  std::ofstream(path) << "vocab_size = \"big\"\n";
  EXPECT_THROW(LoadSweepConfig(path), Error);
  std::ofstream(path) << "manifest = \n";
  EXPECT_THROW(LoadSweepConfig(path), Error);
}

}  // namespace
}  // namespace vocab_lifecycle
