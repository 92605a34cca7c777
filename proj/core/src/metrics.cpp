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

#include "pmrlab/metrics.hpp"

#include <cstdio>

#include "pmrlab/errors.hpp"

namespace pmrlab {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string metrics_csv_header() {
  return "epoch,env_samples,train_success,val_success,memory_size,"
         "retention_passes,reuse_ratio,wall_ms";
}

std::string metrics_csv_row(const EpochMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%lld,%s,%s,%d,%d,%s,%lld", m.epoch,
                m.env_samples, fixed6(m.train_success).c_str(),
                fixed6(m.val_success).c_str(), m.memory_size,
                m.retention_passes, fixed6(m.reuse_ratio).c_str(), m.wall_ms);
  return buf;
}

std::string pretrain_csv_header() {
  return "epoch,train_perplexity,val_perplexity,val_success";
}

std::string pretrain_csv_row(const PretrainEpoch& e) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%s,%s,%s", e.epoch,
                fixed6(e.train_perplexity).c_str(),
                fixed6(e.val_perplexity).c_str(),
                fixed6(e.val_success).c_str());
  return buf;
}

std::string toggles_label(const Toggles& t) {
  std::string label;
  const auto add = [&label](bool on, const char* name) {
    if (!on) return;
    if (!label.empty()) label += '+';
    label += name;
  };
  add(t.rf, "rf");
  add(t.is, "is");
  add(t.pm, "pm");
  add(t.ub, "ub");
  add(t.lb, "lb");
  add(t.pb, "pb");
  add(t.es, "es");
  return label.empty() ? "none" : label;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw IoFailure("cannot create " + path);
  out_ << header << '\n';
  out_.flush();
}

void CsvWriter::append(const std::string& row) {
  out_ << row << '\n';
  out_.flush();
  if (!out_) throw IoFailure("write failed on " + path_);
}

void write_metrics_csv(const std::string& path,
                       const std::vector<EpochMetrics>& metrics) {
  CsvWriter writer(path, metrics_csv_header());
  for (const EpochMetrics& m : metrics) writer.append(metrics_csv_row(m));
}

}  // namespace pmrlab
