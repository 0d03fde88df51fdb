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

#include <algorithm>
#include <cmath>
#include <set>

#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/random.h"

namespace vocab_lifecycle {
namespace {

constexpr uint64_t kMonolingualSteps = 30000;
constexpr uint64_t kBacktranslationSteps[2] = {10000, 20000};
constexpr uint64_t kMonoParallelSteps = 15000;
constexpr uint64_t kFourLanguageSteps = 30000;
constexpr uint64_t kDrawBlock = 65536;

[[noreturn]] void Domain(const std::string& message) {
  throw Error(ErrorCode::kDomain, message);
}

const DatasetRecord& RequireKind(const CorpusManifest& manifest, const std::string& id,
                                 DatasetKind kind) {
  const DatasetRecord* record = manifest.Find(id);
  if (record == nullptr) {
    throw Error(ErrorCode::kInvalidInput, "dataset '" + id + "' is not in the manifest");
  }
  if (record->kind != kind) {
    throw Error(ErrorCode::kInvalidInput, "dataset '" + id + "' must be " +
                                              std::string(ToString(kind)) + ", not " +
                                              std::string(ToString(record->kind)));
  }
  return *record;
}

void RequireDistinct(std::span<const std::string> ids) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidInput, "dataset '" + id + "' listed twice");
    }
  }
}

Json PhaseJson(const SamplingSchedule& s, uint64_t steps) {
  Json phase;
  phase["steps"] = steps;
  phase["phase"] = s.provenance.phase;
  phase["probabilities"] = s.ProbabilitiesJson();
  return phase;
}

}  // namespace

double SamplingSchedule::at(std::string_view id) const {
  for (const auto& [name, p] : probabilities) {
    if (name == id) return p;
  }
  throw Error(ErrorCode::kInvalidInput, "dataset '" + std::string(id) + "' not in schedule");
}

double SamplingSchedule::sum() const {
  double total = 0;
  for (const auto& entry : probabilities) total += entry.second;
  return total;
}

Json SamplingSchedule::ProbabilitiesJson() const {
  Json map = Json::object();
  for (const auto& [id, p] : probabilities) map[id] = p;
  return map;
}

Json SamplingSchedule::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "sampling_schedule";
  doc["temperature"] = temperature;
  doc["provenance"] = {{"recipe", provenance.recipe}, {"phase", provenance.phase}};
  doc["probabilities"] = ProbabilitiesJson();
  StampContentHash(&doc);
  return doc;
}

SamplingSchedule SamplingSchedule::FromJson(const Json& json) {
  try {
    if (json.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::kInvalidInput, "unsupported sampling schedule format_version");
    }
    if (json.contains("content_hash") && !ContentHashMatches(json)) {
      throw Error(ErrorCode::kInvalidInput, "sampling schedule content hash mismatch");
    }
    SamplingSchedule s;
    s.temperature = json.at("temperature").get<double>();
    s.provenance.recipe = json.at("provenance").at("recipe").get<std::string>();
    s.provenance.phase = json.at("provenance").at("phase").get<int>();
    for (const auto& [id, p] : json.at("probabilities").items()) {
      s.probabilities.emplace_back(id, p.get<double>());
    }
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed sampling schedule: ") + e.what());
  }
}

uint64_t AdaptationPlan::total_steps() const {
  uint64_t total = 0;
  for (const auto& p : phases) total += p.steps;
  return total;
}

Json AdaptationPlan::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "adaptation_plan";
  doc["recipe"] = recipe;
  doc["temperature"] = phases.empty() ? kDefaultTemperature : phases.front().schedule.temperature;
  Json list = Json::array();
  for (const auto& p : phases) list.push_back(PhaseJson(p.schedule, p.steps));
  doc["phases"] = std::move(list);
  doc["total_steps"] = total_steps();
  doc["learning_rate"] = learning_rate;
  doc["optimizer_reset"] = optimizer_reset;
  StampContentHash(&doc);
  return doc;
}

AdaptationPlan AdaptationPlan::FromJson(const Json& json) {
  try {
    if (json.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::kInvalidInput, "unsupported adaptation plan format_version");
    }
    if (json.contains("content_hash") && !ContentHashMatches(json)) {
      throw Error(ErrorCode::kInvalidInput, "adaptation plan content hash mismatch");
    }
    AdaptationPlan plan;
    plan.recipe = json.at("recipe").get<std::string>();
    const double temperature = json.at("temperature").get<double>();
    for (const auto& item : json.at("phases")) {
      AdaptationPhase phase;
      phase.steps = item.at("steps").get<uint64_t>();
      phase.schedule.temperature = temperature;
      phase.schedule.provenance = Provenance{plan.recipe, item.at("phase").get<int>()};
      for (const auto& [id, p] : item.at("probabilities").items()) {
        phase.schedule.probabilities.emplace_back(id, p.get<double>());
      }
      plan.phases.push_back(std::move(phase));
    }
    plan.learning_rate = json.at("learning_rate").get<double>();
    plan.optimizer_reset = json.at("optimizer_reset").get<bool>();
    return plan;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed adaptation plan: ") + e.what());
  }
}

std::vector<double> TemperatureProbabilities(std::span<const uint64_t> sizes,
                                             double temperature) {
  if (!(temperature > 0) || !std::isfinite(temperature)) {
    Domain("temperature must be positive and finite");
  }
  std::vector<double> weights;
  weights.reserve(sizes.size());
  double total = 0;
  for (uint64_t n : sizes) {
    weights.push_back(std::pow(static_cast<double>(n), 1.0 / temperature));
    total += weights.back();
  }
  if (!(total > 0)) Domain("all dataset sizes are zero");
  for (double& w : weights) w /= total;
  return weights;
}

SamplingSchedule BaseSchedule(const CorpusManifest& manifest, double temperature) {
  if (manifest.datasets.empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty manifest: nothing to schedule");
  }
  if (!(temperature > 0) || !std::isfinite(temperature)) {
    Domain("temperature must be positive and finite");
  }
  std::vector<uint64_t> sizes[2];
  for (const auto& d : manifest.datasets) {
    sizes[d.kind == DatasetKind::kParallel].push_back(d.line_count);
  }
  const int classes = !sizes[0].empty() + !sizes[1].empty();
  const double class_mass = 1.0 / classes;
  std::vector<double> within[2];
  for (int c = 0; c < 2; ++c) {
    if (!sizes[c].empty()) within[c] = TemperatureProbabilities(sizes[c], temperature);
  }

  SamplingSchedule s;
  s.temperature = temperature;
  size_t next[2] = {0, 0};
  for (const auto& d : manifest.datasets) {
    const int c = d.kind == DatasetKind::kParallel;
    s.probabilities.emplace_back(d.id, class_mass * within[c][next[c]++]);
  }
  return s;
}

SamplingSchedule OverrideAndRescale(const SamplingSchedule& base,
                                    std::span<const std::pair<std::string, double>> fixed,
                                    std::string_view guard, Provenance provenance) {
  std::set<std::string> fixed_ids;
  double fixed_mass = 0;
  for (const auto& [id, p] : fixed) {
    base.at(id);  // must exist
    if (!fixed_ids.insert(id).second) {
      throw Error(ErrorCode::kInvalidInput, "dataset '" + id + "' fixed twice");
    }
    if (!(p >= 0) || p > 1) Domain("fixed probability for '" + id + "' outside [0, 1]");
    fixed_mass += p;
  }
  const double remaining = 1.0 - fixed_mass;
  if (!(remaining > 0)) Domain(std::string(guard));
  double others = 0;
  for (const auto& [id, p] : base.probabilities) {
    if (!fixed_ids.contains(id)) others += p;
  }
  if (!(others > 0)) Domain("nothing to rescale");

  const double scale = remaining / others;
  SamplingSchedule out;
  out.temperature = base.temperature;
  out.provenance = std::move(provenance);
  for (const auto& [id, p] : base.probabilities) {
    double value = p * scale;
    for (const auto& [fid, fp] : fixed) {
      if (fid == id) value = fp;
    }
    out.probabilities.emplace_back(id, value);
  }
  return out;
}

SamplingSchedule MonolingualRecipe(const SamplingSchedule& base, const std::string& new_mono) {
  if (base.at(new_mono) >= 1.0) Domain("nothing to rescale");
  const std::pair<std::string, double> fixed[] = {{new_mono, 0.30}};
  return OverrideAndRescale(base, fixed, "over-allocated schedule", {"mono", 1});
}

SamplingSchedule BacktranslationRecipe(const SamplingSchedule& base,
                                       const std::string& new_mono,
                                       const std::string& pseudo_parallel) {
  const std::pair<std::string, double> fixed[] = {{pseudo_parallel, 0.10}, {new_mono, 0.10}};
  return OverrideAndRescale(base, fixed, "over-allocated schedule", {"mono-bt", 2});
}

SamplingSchedule MonoParallelRecipe(const SamplingSchedule& base, const std::string& new_mono,
                                    const std::string& new_parallel) {
  const double boosted = 10.0 * base.at(new_parallel);
  if (boosted + 0.10 >= 1.0) Domain("over-allocated schedule");
  const std::pair<std::string, double> fixed[] = {{new_parallel, boosted}, {new_mono, 0.10}};
  return OverrideAndRescale(base, fixed, "over-allocated schedule", {"mono-parallel", 1});
}

SamplingSchedule FourLanguageRecipe(const SamplingSchedule& base,
                                    std::span<const std::string> new_mono,
                                    std::span<const std::string> new_parallel) {
  if (new_mono.size() != 4 || new_parallel.size() != 4) {
    throw Error(ErrorCode::kInvalidInput,
                "four-language recipe needs exactly 4 monolingual and 4 parallel datasets");
  }
  double total = 0;
  for (const auto& id : new_parallel) total += base.at(id);
  const double q = 5.0 * (total / 4.0);
  if (4.0 * q + 0.20 >= 1.0) Domain("over-allocated schedule");
  std::vector<std::pair<std::string, double>> fixed;
  for (const auto& id : new_parallel) fixed.emplace_back(id, q);
  for (const auto& id : new_mono) fixed.emplace_back(id, 0.05);
  return OverrideAndRescale(base, fixed, "over-allocated schedule", {"four", 1});
}

AdaptationPlan AdaptMonolingual(const CorpusManifest& manifest, const std::string& new_mono,
                                double temperature) {
  RequireKind(manifest, new_mono, DatasetKind::kMonolingual);
  AdaptationPlan plan;
  plan.recipe = "mono";
  plan.phases.push_back(
      {MonolingualRecipe(BaseSchedule(manifest, temperature), new_mono), kMonolingualSteps});
  return plan;
}

AdaptationPlan AdaptMonolingualBacktranslation(const CorpusManifest& manifest,
                                               const std::string& new_mono,
                                               const std::string& pseudo_parallel,
                                               double temperature) {
  RequireKind(manifest, new_mono, DatasetKind::kMonolingual);
  RequireKind(manifest, pseudo_parallel, DatasetKind::kParallel);

  CorpusManifest without = manifest;
  std::erase_if(without.datasets,
                [&](const DatasetRecord& d) { return d.id == pseudo_parallel; });
  const SamplingSchedule first = MonolingualRecipe(BaseSchedule(without, temperature), new_mono);
  // Keep every phase keyed by the full manifest; the pseudo data is idle first.
  SamplingSchedule phase1;
  phase1.temperature = temperature;
  phase1.provenance = {"mono-bt", 1};
  for (const auto& d : manifest.datasets) {
    phase1.probabilities.emplace_back(d.id, d.id == pseudo_parallel ? 0.0 : first.at(d.id));
  }

  AdaptationPlan plan;
  plan.recipe = "mono-bt";
  plan.phases.push_back({std::move(phase1), kBacktranslationSteps[0]});
  plan.phases.push_back({BacktranslationRecipe(BaseSchedule(manifest, temperature), new_mono,
                                               pseudo_parallel),
                         kBacktranslationSteps[1]});
  return plan;
}

AdaptationPlan AdaptMonoParallel(const CorpusManifest& manifest, const std::string& new_mono,
                                 const std::string& new_parallel, double temperature) {
  RequireKind(manifest, new_mono, DatasetKind::kMonolingual);
  RequireKind(manifest, new_parallel, DatasetKind::kParallel);
  AdaptationPlan plan;
  plan.recipe = "mono-parallel";
  plan.phases.push_back({MonoParallelRecipe(BaseSchedule(manifest, temperature), new_mono,
                                            new_parallel),
                         kMonoParallelSteps});
  return plan;
}

AdaptationPlan AdaptFourLanguages(const CorpusManifest& manifest,
                                  std::span<const std::string> new_mono,
                                  std::span<const std::string> new_parallel,
                                  double temperature) {
  for (const auto& id : new_mono) RequireKind(manifest, id, DatasetKind::kMonolingual);
  for (const auto& id : new_parallel) RequireKind(manifest, id, DatasetKind::kParallel);
  std::vector<std::string> all(new_mono.begin(), new_mono.end());
  all.insert(all.end(), new_parallel.begin(), new_parallel.end());
  RequireDistinct(all);
  AdaptationPlan plan;
  plan.recipe = "four";
  plan.phases.push_back({FourLanguageRecipe(BaseSchedule(manifest, temperature), new_mono,
                                            new_parallel),
                         kFourLanguageSteps});
  return plan;
}

std::vector<std::pair<std::string, uint64_t>> Draw(const SamplingSchedule& schedule,
                                                   uint64_t n, uint64_t seed) {
  if (schedule.probabilities.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cannot draw from an empty schedule");
  }
  std::vector<double> cumulative;
  double running = 0;
  size_t last_positive = 0;
  for (size_t i = 0; i < schedule.probabilities.size(); ++i) {
    const double p = schedule.probabilities[i].second;
    if (!(p >= 0)) Domain("negative probability in schedule");
    if (p > 0) last_positive = i;
    running += p;
    cumulative.push_back(running);
  }
  if (!(running > 0)) Domain("schedule has no mass");

  std::vector<uint64_t> counts(cumulative.size(), 0);
  for (uint64_t block = 0; block * kDrawBlock < n; ++block) {
    auto engine = MakeStream(seed, block);
    const uint64_t end = std::min(n, (block + 1) * kDrawBlock);
    for (uint64_t k = block * kDrawBlock; k < end; ++k) {
      const double u = UniformUnit(engine) * running;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const size_t index = it == cumulative.end()
                               ? last_positive
                               : static_cast<size_t>(it - cumulative.begin());
      ++counts[index];
    }
  }
  std::vector<std::pair<std::string, uint64_t>> out;
  for (size_t i = 0; i < counts.size(); ++i) {
    out.emplace_back(schedule.probabilities[i].first, counts[i]);
  }
  return out;
}

}  // namespace vocab_lifecycle
