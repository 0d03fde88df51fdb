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

#ifndef VOCAB_LIFECYCLE_REPORT_H_
#define VOCAB_LIFECYCLE_REPORT_H_

#include <string>
#include <utility>
#include <vector>

#include "vocab_lifecycle/file_io.h"
#include "vocab_lifecycle/vocab_analysis.h"

namespace vocab_lifecycle {

// 0.954 -> "95.4%"
std::string FormatPercent(double fraction);

// Overlap table with percentages: rows are bases, columns are additions.
std::string SweepPercentCsv(const SweepTable& table);

struct ReportBundle {
  std::string summary;
  // (file name, contents), in a fixed order.
  std::vector<std::pair<std::string, std::string>> csv_files;
};

struct NamedArtifact {
  std::string name;  // usually the source file name
  Json document;
};

// Summarizes overlap reports, sweeps, rank displacements, vocabularies,
// migration plans, schedules and manifests. Throws on an empty list, an
// unknown artifact kind, or artifacts with differing format_version.
ReportBundle BuildReport(const std::vector<NamedArtifact>& artifacts);

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_REPORT_H_
