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

#include "vocab_lifecycle/report.h"

#include <cstdio>
#include <sstream>

#include "vocab_lifecycle/corpus_store.h"
#include "vocab_lifecycle/error.h"
#include "vocab_lifecycle/sampling_scheduler.h"
#include "vocab_lifecycle/vocab_substitution.h"
#include "vocab_lifecycle/vocabulary.h"

namespace vocab_lifecycle {
namespace {

std::string Fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::string Short(const std::string& fingerprint) { return fingerprint.substr(0, 12); }

}  // namespace

std::string FormatPercent(double fraction) { return Fixed(100.0 * fraction, 1) + "%"; }

std::string SweepPercentCsv(const SweepTable& table) {
  std::ostringstream out;
  out << "base";
  for (const auto& label : table.addition_labels) out << ',' << label;
  out << '\n';
  for (size_t r = 0; r < table.base_labels.size(); ++r) {
    out << table.base_labels[r];
    for (size_t c = 0; c < table.addition_labels.size(); ++c) {
      const SweepCell& cell = table.at(r, c);
      out << ',' << (cell.ok() ? FormatPercent(cell.overlap->overlap_fraction()) : "error");
    }
    out << '\n';
  }
  return out.str();
}

ReportBundle BuildReport(const std::vector<NamedArtifact>& artifacts) {
  if (artifacts.empty()) throw Error(ErrorCode::kInvalidInput, "report needs at least one artifact");
  int version = -1;
  for (const auto& a : artifacts) {
    if (!a.document.is_object() || !a.document.contains("format_version") ||
        !a.document.contains("kind")) {
      throw Error(ErrorCode::kInvalidInput,
                  a.name + " is not a vocab-lifecycle artifact (no format_version/kind)");
    }
    const int v = a.document["format_version"].get<int>();
    if (version >= 0 && v != version) {
      throw Error(ErrorCode::kInvalidInput, "mixed format versions: " + std::to_string(version) +
                                                " and " + std::to_string(v) + " (" + a.name +
                                                ")");
    }
    version = v;
  }

  ReportBundle bundle;
  std::ostringstream text;
  std::ostringstream overlap_csv;
  overlap_csv << "artifact,base_id,extended_id,shared_count,base_size,extended_size,overlap\n";
  bool any_overlap = false;
  int sweep_count = 0;
  int rank_count = 0;

  for (const auto& a : artifacts) {
    const std::string kind = a.document["kind"].get<std::string>();
    if (kind == "overlap_report") {
      const OverlapReport r = OverlapReport::FromJson(a.document);
      text << a.name << ": overlap " << FormatPercent(r.overlap_fraction()) << " ("
           << r.shared_count << " of " << r.base_size << " base tokens kept; extended size "
           << r.extended_size << ")\n";
      overlap_csv << a.name << ',' << r.base_id << ',' << r.extended_id << ',' << r.shared_count
                  << ',' << r.base_size << ',' << r.extended_size << ','
                  << FormatPercent(r.overlap_fraction()) << '\n';
      any_overlap = true;
    } else if (kind == "overlap_sweep") {
      const SweepTable t = SweepTable::FromJson(a.document);
      const std::string csv = SweepPercentCsv(t);
      text << a.name << ": percentage of token overlap\n" << csv;
      bundle.csv_files.emplace_back("overlap_table_" + std::to_string(++sweep_count) + ".csv",
                                    csv);
    } else if (kind == "rank_displacement") {
      const RankDisplacement d = RankDisplacement::FromJson(a.document);
      text << a.name << ": " << d.lost_indices.size() << " of " << d.base_size
           << " base tokens lost";
      if (d.quartiles) {
        text << "; lost-index quartiles " << Fixed(d.quartiles->q1, 1) << " / "
             << Fixed(d.quartiles->median, 1) << " / " << Fixed(d.quartiles->q3, 1)
             << " (median at " << FormatPercent(d.quartiles->median / d.base_size)
             << " of the base size)";
      } else {
        text << "; quartiles undefined";
      }
      text << '\n';
      bundle.csv_files.emplace_back("rank_histogram_" + std::to_string(++rank_count) + ".csv",
                                    d.HistogramCsv());
    } else if (kind == "vocabulary") {
      const Vocabulary v = Vocabulary::FromJson(a.document);
      text << a.name << ": vocabulary " << Short(v.fingerprint()) << ", " << v.size()
           << " tokens (" << v.specials().size() << " specials, 256 bytes, "
           << v.learned().size() << " learned), " << v.merges().size() << " merges\n";
    } else if (kind == "migration_plan") {
      const MigrationPlan p = MigrationPlan::FromJson(a.document);
      text << a.name << ": migration " << p.old_size << " -> " << p.new_size << " rows; "
           << p.count(EntryKind::kReuseShared) << " shared, "
           << p.count(EntryKind::kReuseRecycled) << " recycled, "
           << p.count(EntryKind::kFresh) << " fresh\n";
    } else if (kind == "sampling_schedule") {
      const SamplingSchedule s = SamplingSchedule::FromJson(a.document);
      text << a.name << ": schedule (" << s.provenance.recipe << ", T=" << s.temperature
           << ")\n";
      for (const auto& [id, p] : s.probabilities) {
        text << "  " << id << ' ' << Fixed(100.0 * p, 2) << "%\n";
      }
    } else if (kind == "adaptation_plan") {
      const AdaptationPlan plan = AdaptationPlan::FromJson(a.document);
      text << a.name << ": adaptation recipe " << plan.recipe << ", " << plan.total_steps()
           << " steps, lr " << plan.learning_rate
           << (plan.optimizer_reset ? ", optimizer reset\n" : "\n");
      for (size_t i = 0; i < plan.phases.size(); ++i) {
        text << "  phase " << (i + 1) << " (" << plan.phases[i].steps << " steps):";
        for (const auto& [id, p] : plan.phases[i].schedule.probabilities) {
          text << ' ' << id << '=' << Fixed(100.0 * p, 2) << '%';
        }
        text << '\n';
      }
    } else if (kind == "corpus_manifest") {
      const CorpusManifest m = CorpusManifest::FromJson(a.document);
      text << a.name << ": manifest with " << m.datasets.size() << " datasets\n";
      for (const auto& d : m.datasets) {
        text << "  " << d.id << ' ' << d.language << ' ' << ToString(d.kind) << ' '
             << d.line_count << " lines\n";
      }
    } else {
      throw Error(ErrorCode::kInvalidInput, a.name + ": unsupported artifact kind '" + kind + "'");
    }
  }
  if (any_overlap) bundle.csv_files.insert(bundle.csv_files.begin(), {"overlap.csv", overlap_csv.str()});
  bundle.summary = text.str();
  return bundle;
}

}  // namespace vocab_lifecycle
