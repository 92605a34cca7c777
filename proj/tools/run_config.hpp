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

#ifndef PMRLAB_TOOLS_RUN_CONFIG_HPP_
#define PMRLAB_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <set>
#include <string>

#include "pmrlab/trainers.hpp"

namespace pmrlab {

// Flat key=value run configuration shared by all commands. Sources, in
// order of precedence: built-in defaults < per-command defaults < config
// file < --set overrides < dedicated flags (--seed, --out). Unknown keys
// and malformed values abort with ConfigInvalid before any file is
// touched.
struct RunConfig {
  std::string data_dir = "data";
  std::string out_dir = "out";
  uint64_t seed = 1;
  int epochs = 30;
  int episodes_per_epoch = 1500;
  double lr = 0.05;
  std::string optimizer = "sgd";
  int hidden = 64;
  int embed = 16;
  double omega_max = 10.0;
  int n_max = 2;
  int fixed_passes = 3;
  double baseline_decay = 0.99;
  int max_rounds = kPlayMaxRounds;
  int max_qlen = kMaxQuestionLen;
  Toggles toggles;
  int n_train = 3000;
  int n_val = 1000;
  int n_test = 1000;

  // Applies one key=value assignment. Throws ConfigInvalid on unknown
  // keys, unparseable values and out-of-range values.
  void set(const std::string& key, const std::string& value);

  // True when the key was assigned explicitly (file or flag), used by
  // commands whose defaults differ from the struct's.
  bool was_set(const std::string& key) const {
    return set_keys_.count(key) > 0;
  }

  // Reads `key = value` lines ('#' comments, blank lines ignored).
  // Throws IoFailure when the file cannot be read.
  void load_file(const std::string& path);

  // Parses "key=value" as passed to --set.
  void set_from_flag(const std::string& assignment);

  OptimizerKind optimizer_kind() const;
  PolicyConfig policy_config() const;
  TrainConfig train_config() const;

 private:
  std::set<std::string> set_keys_;
};

}  // namespace pmrlab

#endif  // PMRLAB_TOOLS_RUN_CONFIG_HPP_
