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

#include "vocab_lifecycle/sampling_scheduler.h"

#include <gtest/gtest.h>

#include <cmath>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/random.h"

namespace vocab_lifecycle {
namespace {

DatasetRecord Record(const std::string& id, DatasetKind kind, uint64_t lines) {
  DatasetRecord r;
  r.id = id;
  r.language = id.substr(0, 2);
  r.kind = kind;
  r.line_count = lines;
  r.byte_count = lines;
  r.source_path = "/dev/null";
  return r;
}

SamplingSchedule Flat(std::vector<std::pair<std::string, double>> p) {
  SamplingSchedule s;
  s.probabilities = std::move(p);
  return s;
}

void ExpectDistribution(const SamplingSchedule& s) {
  EXPECT_NEAR(s.sum(), 1.0, 1e-12);
  for (const auto& [id, p] : s.probabilities) {
    EXPECT_GE(p, 0.0) << id;
    EXPECT_LE(p, 1.0) << id;
  }
}

TEST(TemperatureProbabilities, MatchesHighPrecisionValues) {
  // n^(1/T) / sum over n^(1/T), evaluated with 50-digit arithmetic.
  const std::vector<uint64_t> sizes = {1000, 10};
  const auto p = TemperatureProbabilities(sizes, 5.0);
  EXPECT_NEAR(p[0], 0.71525275104919858803700211808629459932035428848923, 1e-12);
  EXPECT_NEAR(p[1], 0.28474724895080141196299788191370540067964571151077, 1e-12);
}

TEST(TemperatureProbabilities, LimitsOfTheTemperature) {
  const std::vector<uint64_t> sizes = {300, 100};
  const auto proportional = TemperatureProbabilities(sizes, 1.0);
  EXPECT_NEAR(proportional[0], 0.75, 1e-15);
  const auto flat = TemperatureProbabilities(sizes, 1e9);
  EXPECT_NEAR(flat[0], 0.5, 1e-8);
}

TEST(BaseSchedule, SplitsMassEquallyBetweenClasses) {
  CorpusManifest m;
  m.datasets = {Record("en.mono", DatasetKind::kMonolingual, 1000),
                Record("en.parallel", DatasetKind::kParallel, 50),
                Record("fr.mono", DatasetKind::kMonolingual, 10)};
  const SamplingSchedule s = BaseSchedule(m, 5.0);
  EXPECT_NEAR(s.at("en.parallel"), 0.5, 1e-15);
  EXPECT_NEAR(s.at("en.mono"), 0.5 * 0.71525275104919858803700211808629459932035428848923,
              1e-12);
  EXPECT_EQ(s.probabilities[1].first, "en.parallel");  // manifest order
  EXPECT_EQ(s.provenance, (Provenance{"base", 0}));
  ExpectDistribution(s);
  EXPECT_THROW(s.at("missing"), Error);
}

TEST(BaseSchedule, SingleClassTakesAllMass) {
  CorpusManifest m;
  m.datasets = {Record("a.mono", DatasetKind::kMonolingual, 4),
                Record("b.mono", DatasetKind::kMonolingual, 4)};
  const SamplingSchedule s = BaseSchedule(m);
  EXPECT_DOUBLE_EQ(s.at("a.mono"), 0.5);
  ExpectDistribution(s);
}

TEST(BaseSchedule, RejectsBadInputs) {
  CorpusManifest empty;
  EXPECT_THROW(BaseSchedule(empty), Error);
  CorpusManifest m;
  m.datasets = {Record("a.mono", DatasetKind::kMonolingual, 4)};
  EXPECT_THROW(BaseSchedule(m, 0.0), Error);
  EXPECT_THROW(BaseSchedule(m, -1.0), Error);
  EXPECT_THROW(BaseSchedule(m, std::nan("")), Error);
}

TEST(Recipes, MonolingualFixesThirtyPercent) {
  const auto s = MonolingualRecipe(Flat({{"a", 0.5}, {"b", 0.3}, {"new", 0.2}}), "new");
  EXPECT_NEAR(s.at("new"), 0.30, 1e-15);
  EXPECT_NEAR(s.at("a"), 0.4375, 1e-15);
  EXPECT_NEAR(s.at("b"), 0.2625, 1e-15);
  EXPECT_EQ(s.provenance.recipe, "mono");
  ExpectDistribution(s);
}

TEST(Recipes, BacktranslationFixesBothNewDatasets) {
  const auto s = BacktranslationRecipe(
      Flat({{"a", 0.45}, {"b", 0.45}, {"mono", 0.06}, {"pseudo", 0.04}}), "mono", "pseudo");
  EXPECT_NEAR(s.at("mono"), 0.1, 1e-15);
  EXPECT_NEAR(s.at("pseudo"), 0.1, 1e-15);
  EXPECT_NEAR(s.at("a"), 0.4, 1e-15);
  EXPECT_EQ(s.provenance.phase, 2);
  ExpectDistribution(s);
}

TEST(Recipes, MonoParallelUpsamplesTenfold) {
  const auto s = MonoParallelRecipe(
      Flat({{"a", 0.62}, {"b", 0.31}, {"mono", 0.05}, {"par", 0.02}}), "mono", "par");
  EXPECT_NEAR(s.at("par"), 0.2, 1e-15);
  EXPECT_NEAR(s.at("mono"), 0.1, 1e-15);
  EXPECT_NEAR(s.at("a"), 14.0 / 30.0, 1e-15);
  EXPECT_NEAR(s.at("b"), 7.0 / 30.0, 1e-15);
  ExpectDistribution(s);
  EXPECT_THROW(
      MonoParallelRecipe(Flat({{"a", 0.85}, {"mono", 0.05}, {"par", 0.10}}), "mono", "par"),
      Error);
}

TEST(Recipes, FourLanguagesShareFiveTimesTheMean) {
  const std::vector<std::string> monos = {"m1", "m2", "m3", "m4"};
  const std::vector<std::string> pars = {"p1", "p2", "p3", "p4"};
  const auto s = FourLanguageRecipe(
      Flat({{"a", 0.50}, {"b", 0.36}, {"m1", 0.02}, {"m2", 0.02}, {"m3", 0.02}, {"m4", 0.02},
            {"p1", 0.01}, {"p2", 0.01}, {"p3", 0.03}, {"p4", 0.01}}),
      monos, pars);
  for (const auto& p : pars) EXPECT_NEAR(s.at(p), 0.075, 1e-15);
  for (const auto& m : monos) EXPECT_NEAR(s.at(m), 0.05, 1e-15);
  EXPECT_NEAR(s.at("a"), 0.25 / 0.86, 1e-15);
  ExpectDistribution(s);
  EXPECT_THROW(FourLanguageRecipe(Flat({{"a", 1.0}}), monos, std::vector<std::string>{"a"}),
               Error);
}

TEST(Recipes, GuardsAgainstImpossibleSchedules) {
  EXPECT_THROW(MonolingualRecipe(Flat({{"new", 1.0}}), "new"), Error);
  EXPECT_THROW(MonolingualRecipe(Flat({{"a", 1.0}}), "missing"), Error);
}

// Random schedules: the fixed entries are exact, the rest keep their ratios.
TEST(RecipeProperty, RescalingPreservesRatios) {
  auto rng = MakeStream(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::string, double>> p;
    double total = 0;
    const uint64_t n = 3 + UniformBelow(rng, 8);
    for (uint64_t i = 0; i < n; ++i) {
      const double w = 0.01 + UniformUnit(rng);
      p.emplace_back("d" + std::to_string(i), w);
      total += w;
    }
    for (auto& [id, w] : p) w /= total;
    const SamplingSchedule base = Flat(p);
    const auto s = MonolingualRecipe(base, "d0");
    EXPECT_NEAR(s.at("d0"), 0.30, 1e-15);
    ExpectDistribution(s);
    for (uint64_t i = 2; i < n; ++i) {
      const std::string id = "d" + std::to_string(i);
      EXPECT_NEAR(s.at(id) / s.at("d1"), base.at(id) / base.at("d1"), 1e-9);
    }
  }
}

class PlanTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* langs[] = {"en", "fr", "de", "bn", "pl", "kk", "ps"};
    for (size_t i = 0; i < std::size(langs); ++i) {
      const std::string l = langs[i];
      m_.datasets.push_back(Record(l + ".mono", DatasetKind::kMonolingual, 100000));
      m_.datasets.push_back(
          Record(l + ".parallel", DatasetKind::kParallel, i < 3 ? 5000000 : 3000));
    }
    m_.datasets.push_back(Record("bn.bt", DatasetKind::kParallel, 100000));
  }
  CorpusManifest m_;
};

TEST_F(PlanTest, MonolingualPlan) {
  const AdaptationPlan plan = AdaptMonolingual(m_, "bn.mono");
  ASSERT_EQ(plan.phases.size(), 1u);
  EXPECT_EQ(plan.total_steps(), 30000u);
  EXPECT_DOUBLE_EQ(plan.learning_rate, 5e-5);
  EXPECT_TRUE(plan.optimizer_reset);
  EXPECT_NEAR(plan.phases[0].schedule.at("bn.mono"), 0.3, 1e-15);
  EXPECT_THROW(AdaptMonolingual(m_, "bn.parallel"), Error);  // wrong kind
}

TEST_F(PlanTest, BacktranslationPlanHasTwoPhases) {
  const AdaptationPlan plan = AdaptMonolingualBacktranslation(m_, "bn.mono", "bn.bt");
  ASSERT_EQ(plan.phases.size(), 2u);
  EXPECT_EQ(plan.phases[0].steps, 10000u);
  EXPECT_EQ(plan.phases[1].steps, 20000u);
  // Phase one leaves the pseudo-parallel data idle.
  EXPECT_EQ(plan.phases[0].schedule.at("bn.bt"), 0.0);
  EXPECT_NEAR(plan.phases[0].schedule.at("bn.mono"), 0.3, 1e-15);
  EXPECT_NEAR(plan.phases[1].schedule.at("bn.bt"), 0.1, 1e-15);
  EXPECT_NEAR(plan.phases[1].schedule.at("bn.mono"), 0.1, 1e-15);
  for (const auto& phase : plan.phases) ExpectDistribution(phase.schedule);
  EXPECT_EQ(plan.phases[0].schedule.probabilities.size(), m_.datasets.size());
}

TEST_F(PlanTest, MonoParallelAndFourLanguagePlans) {
  const SamplingSchedule base = BaseSchedule(m_);
  const AdaptationPlan mp = AdaptMonoParallel(m_, "bn.mono", "bn.parallel");
  EXPECT_EQ(mp.total_steps(), 15000u);
  EXPECT_NEAR(mp.phases[0].schedule.at("bn.parallel"), 10 * base.at("bn.parallel"), 1e-15);

  const std::vector<std::string> monos = {"bn.mono", "pl.mono", "kk.mono", "ps.mono"};
  const std::vector<std::string> pars = {"bn.parallel", "pl.parallel", "kk.parallel",
                                         "ps.parallel"};
  const AdaptationPlan four = AdaptFourLanguages(m_, monos, pars);
  EXPECT_EQ(four.total_steps(), 30000u);
  double mean = 0;
  for (const auto& p : pars) mean += base.at(p) / 4;
  for (const auto& p : pars) EXPECT_NEAR(four.phases[0].schedule.at(p), 5 * mean, 1e-15);
  ExpectDistribution(four.phases[0].schedule);
  EXPECT_THROW(AdaptFourLanguages(m_, pars, monos), Error);  // kinds swapped
}

TEST_F(PlanTest, JsonRoundTrips) {
  const AdaptationPlan plan = AdaptMonolingualBacktranslation(m_, "bn.mono", "bn.bt");
  const Json json = plan.ToJson();
  EXPECT_EQ(json.at("kind"), "adaptation_plan");
  EXPECT_EQ(json.at("total_steps"), 30000);
  EXPECT_EQ(AdaptationPlan::FromJson(json), plan);

  const SamplingSchedule s = BaseSchedule(m_);
  const Json sj = s.ToJson();
  EXPECT_EQ(sj.at("kind"), "sampling_schedule");
  EXPECT_EQ(SamplingSchedule::FromJson(sj), s);
  Json bad = sj;
  bad["temperature"] = 4.0;
  EXPECT_THROW(SamplingSchedule::FromJson(bad), Error);
}

TEST(Draw, IsSeededAndCountsSumToN) {
  const SamplingSchedule s = Flat({{"a", 0.7}, {"b", 0.2}, {"c", 0.1}});
  const auto counts = Draw(s, 200000, 3);
  EXPECT_EQ(counts, Draw(s, 200000, 3));
  EXPECT_NE(counts, Draw(s, 200000, 4));
  uint64_t total = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    EXPECT_EQ(counts[i].first, s.probabilities[i].first);
    total += counts[i].second;
    // Binomial standard deviation is at most ~0.001 here.
    EXPECT_NEAR(static_cast<double>(counts[i].second) / 200000, s.probabilities[i].second,
                0.005);
  }
  EXPECT_EQ(total, 200000u);
}

TEST(Draw, ZeroProbabilityIsNeverDrawn) {
  const auto counts = Draw(Flat({{"a", 0.0}, {"b", 1.0}, {"c", 0.0}}), 70000, 1);
  EXPECT_EQ(counts[0].second, 0u);
  EXPECT_EQ(counts[1].second, 70000u);
  EXPECT_EQ(counts[2].second, 0u);
}

}  // namespace
}  // namespace vocab_lifecycle
