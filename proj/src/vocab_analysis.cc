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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "toml.hpp"
#include "vocab_lifecycle/error.h"

namespace vocab_lifecycle {
namespace {

std::string FormatFixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

void CheckVersion(const Json& json, int expected, const char* what) {
  if (json.at("format_version").get<int>() != expected) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("unsupported format_version for ") + what);
  }
  if (json.contains("content_hash") && !ContentHashMatches(json)) {
    throw Error(ErrorCode::kInvalidInput, std::string("content hash mismatch in ") + what);
  }
}

}  // namespace

double OverlapReport::overlap_fraction() const {
  return base_size == 0 ? 0.0 : static_cast<double>(shared_count) / base_size;
}

Json OverlapReport::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "overlap_report";
  doc["base_id"] = base_id;
  doc["extended_id"] = extended_id;
  doc["shared_count"] = shared_count;
  doc["base_size"] = base_size;
  doc["extended_size"] = extended_size;
  doc["overlap_fraction"] = overlap_fraction();
  if (shared_tokens_sample) doc["shared_tokens_sample"] = *shared_tokens_sample;
  return doc;
}

OverlapReport OverlapReport::FromJson(const Json& json) {
  try {
    CheckVersion(json, kFormatVersion, "overlap report");
    OverlapReport r;
    r.base_id = json.at("base_id").get<std::string>();
    r.extended_id = json.at("extended_id").get<std::string>();
    r.shared_count = json.at("shared_count").get<uint64_t>();
    r.base_size = json.at("base_size").get<uint64_t>();
    r.extended_size = json.at("extended_size").get<uint64_t>();
    if (json.contains("shared_tokens_sample")) {
      r.shared_tokens_sample = json["shared_tokens_sample"].get<std::vector<std::string>>();
    }
    if (r.shared_count > std::min(r.base_size, r.extended_size)) {
      throw Error(ErrorCode::kInvalidInput, "shared_count exceeds vocabulary size");
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed overlap report: ") + e.what());
  }
}

OverlapReport Overlap(const Vocabulary& base, const Vocabulary& extended,
                      size_t sample_size) {
  OverlapReport report;
  report.base_id = base.fingerprint();
  report.extended_id = extended.fingerprint();
  report.base_size = base.size();
  report.extended_size = extended.size();
  std::vector<std::string> sample;
  for (size_t i = 0; i < base.size(); ++i) {
    const std::string& t = base.tokens()[i];
    if (!extended.contains(t)) continue;
    ++report.shared_count;
    if (sample.size() < sample_size && i >= base.learned_offset()) sample.push_back(t);
  }
  if (sample_size > 0) report.shared_tokens_sample = std::move(sample);
  return report;
}

double Quantile(const std::vector<uint64_t>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double a = static_cast<double>(sorted[lo]);
  const double b = static_cast<double>(sorted[hi]);
  return a + (h - static_cast<double>(lo)) * (b - a);
}

double RankDisplacement::bin_lower(size_t bin) const {
  return static_cast<double>(base_size) * bin / histogram.size();
}

double RankDisplacement::bin_upper(size_t bin) const {
  return static_cast<double>(base_size) * (bin + 1) / histogram.size();
}

Json RankDisplacement::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "rank_displacement";
  doc["base_size"] = base_size;
  doc["lost_count"] = lost_indices.size();
  doc["lost_indices"] = lost_indices;
  if (quartiles) {
    doc["quartiles"] = {{"q1", quartiles->q1},
                        {"median", quartiles->median},
                        {"q3", quartiles->q3}};
  } else {
    doc["quartiles"] = nullptr;
  }
  doc["histogram"] = histogram;
  return doc;
}

RankDisplacement RankDisplacement::FromJson(const Json& json) {
  try {
    CheckVersion(json, kFormatVersion, "rank displacement");
    RankDisplacement r;
    r.base_size = json.at("base_size").get<uint64_t>();
    r.lost_indices = json.at("lost_indices").get<std::vector<uint64_t>>();
    r.histogram = json.at("histogram").get<std::vector<uint64_t>>();
    if (!json.at("quartiles").is_null()) {
      const auto& q = json["quartiles"];
      r.quartiles = Quartiles{q.at("q1").get<double>(), q.at("median").get<double>(),
                              q.at("q3").get<double>()};
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed rank displacement: ") + e.what());
  }
}

std::string RankDisplacement::HistogramCsv() const {
  std::ostringstream out;
  out << "bin,lower,upper,count\n";
  for (size_t b = 0; b < histogram.size(); ++b) {
    out << b << ',' << FormatFixed(bin_lower(b), 3) << ',' << FormatFixed(bin_upper(b), 3)
        << ',' << histogram[b] << '\n';
  }
  return out.str();
}

std::string RankDisplacement::QuartilesCsv() const {
  std::ostringstream out;
  out << "lost_count,base_size,q1,median,q3\n";
  out << lost_indices.size() << ',' << base_size << ',';
  if (quartiles) {
    out << FormatFixed(quartiles->q1, 3) << ',' << FormatFixed(quartiles->median, 3) << ','
        << FormatFixed(quartiles->q3, 3);
  } else {
    out << ",,";
  }
  out << '\n';
  return out.str();
}

RankDisplacement ComputeRankDisplacement(const Vocabulary& base,
                                         const Vocabulary& extended, uint32_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidInput, "bins must be at least 1");
  RankDisplacement r;
  r.base_size = base.size();
  r.histogram.assign(bins, 0);
  for (size_t i = 0; i < base.size(); ++i) {
    if (extended.contains(base.tokens()[i])) continue;
    r.lost_indices.push_back(i);
    ++r.histogram[i * bins / base.size()];
  }
  if (!r.lost_indices.empty()) {
    r.quartiles = Quartiles{Quantile(r.lost_indices, 0.25), Quantile(r.lost_indices, 0.5),
                            Quantile(r.lost_indices, 0.75)};
  }
  return r;
}

Json SweepTable::ToJson() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "overlap_sweep";
  doc["base_labels"] = base_labels;
  doc["addition_labels"] = addition_labels;
  Json list = Json::array();
  for (size_t r = 0; r < base_labels.size(); ++r) {
    for (size_t c = 0; c < addition_labels.size(); ++c) {
      const SweepCell& cell = at(r, c);
      Json item;
      item["base"] = base_labels[r];
      item["addition"] = addition_labels[c];
      if (cell.ok()) {
        item["overlap"] = cell.overlap->ToJson();
        if (cell.displacement) {
          Json d = cell.displacement->ToJson();
          d.erase("lost_indices");
          item["displacement"] = std::move(d);
        }
      } else {
        item["error"] = cell.error;
      }
      list.push_back(std::move(item));
    }
  }
  doc["cells"] = std::move(list);
  StampContentHash(&doc);
  return doc;
}

SweepTable SweepTable::FromJson(const Json& json) {
  try {
    CheckVersion(json, kFormatVersion, "overlap sweep");
    SweepTable t;
    t.base_labels = json.at("base_labels").get<std::vector<std::string>>();
    t.addition_labels = json.at("addition_labels").get<std::vector<std::string>>();
    for (const auto& item : json.at("cells")) {
      SweepCell cell;
      if (item.contains("overlap")) {
        cell.overlap = OverlapReport::FromJson(item["overlap"]);
      } else {
        cell.error = item.value("error", std::string("missing"));
      }
      t.cells.push_back(std::move(cell));
    }
    if (t.cells.size() != t.base_labels.size() * t.addition_labels.size()) {
      throw Error(ErrorCode::kInvalidInput, "sweep cell count does not match labels");
    }
    return t;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed sweep: ") + e.what());
  }
}

std::string SweepTable::ToCsv() const {
  std::ostringstream out;
  out << "base";
  for (const auto& label : addition_labels) out << ',' << label;
  out << '\n';
  for (size_t r = 0; r < base_labels.size(); ++r) {
    out << base_labels[r];
    for (size_t c = 0; c < addition_labels.size(); ++c) {
      const SweepCell& cell = at(r, c);
      out << ',' << (cell.ok() ? FormatFixed(cell.overlap->overlap_fraction(), 6) : "error");
    }
    out << '\n';
  }
  return out.str();
}

SweepTable OverlapSweep(const CorpusManifest& manifest, const SweepSetup& setup) {
  setup.config.Validate();
  if (setup.bases.empty() || setup.additions.empty()) {
    throw Error(ErrorCode::kInvalidInput, "sweep needs at least one base and one addition");
  }
  for (size_t i = 1; i < setup.bases.size(); ++i) {
    const auto& prev = setup.bases[i - 1].dataset_ids;
    const std::set<std::string> current(setup.bases[i].dataset_ids.begin(),
                                        setup.bases[i].dataset_ids.end());
    for (const auto& id : prev) {
      if (!current.contains(id)) {
        throw Error(ErrorCode::kInvalidInput, "sweep base '" + setup.bases[i].label +
                                                  "' does not contain dataset " + id +
                                                  " of the previous base");
      }
    }
  }

  // Word tables are additive, so each dataset is scanned once.
  std::map<std::string, WordCounts> per_dataset;
  auto words_for = [&](const std::vector<std::string>& ids) {
    WordCounts total(setup.config.word_start_marker);
    for (const auto& id : ids) {
      auto it = per_dataset.find(id);
      if (it == per_dataset.end()) {
        const std::string one[] = {id};
        it = per_dataset
                 .emplace(id, CountWords(manifest, one, setup.config.word_start_marker,
                                         setup.config.threads))
                 .first;
      }
      total.Add(it->second);
    }
    return total;
  };

  SweepTable table;
  for (const auto& b : setup.bases) table.base_labels.push_back(b.label);
  for (const auto& a : setup.additions) table.addition_labels.push_back(a.label);

  for (const auto& base_sel : setup.bases) {
    std::optional<Vocabulary> base;
    std::string base_error;
    try {
      base.emplace(Train(words_for(base_sel.dataset_ids), setup.config, base_sel.dataset_ids));
    } catch (const Error& e) {
      base_error = std::string("base: ") + e.what();
    }
    if (setup.keep_vocabularies) {
      table.base_vocabs.push_back(base ? std::make_shared<const Vocabulary>(*base) : nullptr);
    }
    for (const auto& addition : setup.additions) {
      SweepCell cell;
      if (!base) {
        cell.error = base_error;
        table.cells.push_back(std::move(cell));
        continue;
      }
      std::vector<std::string> ids = base_sel.dataset_ids;
      for (const auto& id : addition.dataset_ids) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
      }
      try {
        const Vocabulary extended = Train(words_for(ids), setup.config, ids);
        cell.overlap = Overlap(*base, extended);
        cell.displacement = ComputeRankDisplacement(*base, extended, setup.rank_bins);
        if (setup.keep_vocabularies) cell.extended_vocab = std::make_shared<const Vocabulary>(extended);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

SweepConfigFile LoadSweepConfig(const std::filesystem::path& path) {
  toml::table doc;
  try {
    doc = toml::parse(ReadFile(path), path.string());
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput,
                "malformed sweep config " + path.string() + ": " + std::string(e.description()));
  }
  SweepConfigFile out;
  const auto manifest = doc["manifest"].value<std::string>();
  const auto size = doc["vocab_size"].value<int64_t>();
  if (!manifest || !size || *size <= 0) {
    throw Error(ErrorCode::kInvalidInput,
                "sweep config needs 'manifest' and a positive 'vocab_size'");
  }
  out.manifest_path = path.parent_path() / *manifest;
  out.setup.config.target_size = static_cast<uint64_t>(*size);
  out.setup.config.min_pair_frequency =
      static_cast<uint64_t>(doc["min_pair_frequency"].value_or(int64_t{2}));
  out.setup.config.threads = static_cast<int>(doc["threads"].value_or(int64_t{1}));
  out.setup.rank_bins = static_cast<uint32_t>(doc["rank_bins"].value_or(int64_t{40}));

  auto read_selections = [&](const char* key) {
    std::vector<SweepSelection> list;
    const toml::array* items = doc[key].as_array();
    if (items == nullptr) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string("sweep config needs [[") + key + "]] tables");
    }
    for (const auto& node : *items) {
      const toml::table* t = node.as_table();
      const toml::array* ids = t ? (*t)["datasets"].as_array() : nullptr;
      if (t == nullptr || ids == nullptr) {
        throw Error(ErrorCode::kInvalidInput,
                    std::string("each [[") + key + "]] needs a datasets array");
      }
      SweepSelection sel;
      sel.label = (*t)["label"].value_or(std::to_string(list.size() + 1));
      for (const auto& id : *ids) {
        auto value = id.value<std::string>();
        if (!value) throw Error(ErrorCode::kInvalidInput, "dataset ids must be strings");
        sel.dataset_ids.push_back(*value);
      }
      list.push_back(std::move(sel));
    }
    return list;
  };
  out.setup.bases = read_selections("base");
  out.setup.additions = read_selections("addition");
  return out;
}

}  // namespace vocab_lifecycle
