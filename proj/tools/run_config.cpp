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

#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <limits>

#include "pmrlab/errors.hpp"

namespace pmrlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigInvalid("config: bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigInvalid("config: bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "data_dir") {
    data_dir = value;
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "seed") {
    seed = parse_number<uint64_t>(key, value);
  } else if (key == "epochs") {
    epochs = parse_number<int>(key, value);
    if (epochs < 0) throw ConfigInvalid("config: epochs must be >= 0");
  } else if (key == "episodes_per_epoch") {
    episodes_per_epoch = parse_number<int>(key, value);
    if (episodes_per_epoch < 1) {
      throw ConfigInvalid("config: episodes_per_epoch must be >= 1");
    }
  } else if (key == "lr") {
    lr = parse_number<double>(key, value);
    if (!(lr > 0.0)) throw ConfigInvalid("config: lr must be > 0");
  } else if (key == "optimizer") {
    if (value != "sgd" && value != "adam") {
      throw ConfigInvalid("config: optimizer must be sgd or adam");
    }
    optimizer = value;
  } else if (key == "hidden") {
    hidden = parse_number<int>(key, value);
    if (hidden < 1) throw ConfigInvalid("config: hidden must be >= 1");
  } else if (key == "embed") {
    embed = parse_number<int>(key, value);
    if (embed < 1) throw ConfigInvalid("config: embed must be >= 1");
  } else if (key == "omega_max") {
    omega_max = parse_number<double>(key, value);
    if (!(omega_max >= 1.0)) {
      throw ConfigInvalid("config: omega_max must be >= 1");
    }
  } else if (key == "n_max") {
    n_max = parse_number<int>(key, value);
    if (n_max < 0) throw ConfigInvalid("config: n_max must be >= 0");
  } else if (key == "fixed_passes") {
    fixed_passes = parse_number<int>(key, value);
    if (fixed_passes < 1) {
      throw ConfigInvalid("config: fixed_passes must be >= 1");
    }
  } else if (key == "baseline_decay") {
    baseline_decay = parse_number<double>(key, value);
    if (!(baseline_decay >= 0.0) || !(baseline_decay < 1.0)) {
      throw ConfigInvalid("config: baseline_decay must be in [0, 1)");
    }
  } else if (key == "max_rounds") {
    max_rounds = parse_number<int>(key, value);
    if (max_rounds < 1) throw ConfigInvalid("config: max_rounds must be >= 1");
  } else if (key == "max_qlen") {
    max_qlen = parse_number<int>(key, value);
    if (max_qlen < 1) throw ConfigInvalid("config: max_qlen must be >= 1");
  } else if (key == "toggles.rf") {
    toggles.rf = parse_bool(key, value);
  } else if (key == "toggles.is") {
    toggles.is = parse_bool(key, value);
  } else if (key == "toggles.pm") {
    toggles.pm = parse_bool(key, value);
  } else if (key == "toggles.ub") {
    toggles.ub = parse_bool(key, value);
  } else if (key == "toggles.lb") {
    toggles.lb = parse_bool(key, value);
  } else if (key == "toggles.pb") {
    toggles.pb = parse_bool(key, value);
  } else if (key == "toggles.es") {
    toggles.es = parse_bool(key, value);
  } else if (key == "n_train") {
    n_train = parse_number<int>(key, value);
    if (n_train < 1) throw ConfigInvalid("config: n_train must be >= 1");
  } else if (key == "n_val") {
    n_val = parse_number<int>(key, value);
    if (n_val < 1) throw ConfigInvalid("config: n_val must be >= 1");
  } else if (key == "n_test") {
    n_test = parse_number<int>(key, value);
    if (n_test < 1) throw ConfigInvalid("config: n_test must be >= 1");
  } else {
    throw ConfigInvalid("config: unknown key '" + key + "'");
  }
  set_keys_.insert(key);
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigInvalid("config: " + path + ":" + std::to_string(lineno) +
                          ": expected key = value");
    }
    set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void RunConfig::set_from_flag(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigInvalid("--set expects key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

OptimizerKind RunConfig::optimizer_kind() const {
  return optimizer == "adam" ? OptimizerKind::kAdam : OptimizerKind::kSgd;
}

PolicyConfig RunConfig::policy_config() const {
  return PolicyConfig{hidden, embed};
}

TrainConfig RunConfig::train_config() const {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.episodes_per_epoch = episodes_per_epoch;
  cfg.lr = lr;
  cfg.optimizer = optimizer_kind();
  cfg.omega_max = omega_max;
  cfg.n_max = n_max;
  cfg.fixed_passes = fixed_passes;
  cfg.baseline_decay = baseline_decay;
  cfg.max_rounds = max_rounds;
  cfg.max_qlen = max_qlen;
  cfg.toggles = toggles;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace pmrlab
