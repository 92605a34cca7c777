// Copyright 2026 The pmrlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMRLAB_METRICS_HPP_
#define PMRLAB_METRICS_HPP_

#include <fstream>
#include <string>
#include <vector>

#include "pmrlab/trainers.hpp"

namespace pmrlab {

// CSV artifacts. Formatting is pinned (fixed six decimals for rates) so a
// repeated run with the same seed produces byte-identical files.

std::string metrics_csv_header();
std::string metrics_csv_row(const EpochMetrics& m);

std::string pretrain_csv_header();
std::string pretrain_csv_row(const PretrainEpoch& e);

// Canonical toggle label: active toggles joined by '+' in the fixed order
// rf, is, pm, ub, lb, pb, es; "none" when all are off.
std::string toggles_label(const Toggles& t);

// Line-buffered CSV writer: header on open, one flushed line per row, so
// partial files of interrupted runs are still readable.
class CsvWriter {
 public:
  // Throws IoFailure when the file cannot be created.
  CsvWriter(const std::string& path, const std::string& header);

  void append(const std::string& row);

 private:
  std::ofstream out_;
  std::string path_;
};

void write_metrics_csv(const std::string& path,
                       const std::vector<EpochMetrics>& metrics);

}  // namespace pmrlab

#endif  // PMRLAB_METRICS_HPP_
