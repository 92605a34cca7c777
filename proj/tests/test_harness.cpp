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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "pmrlab/errors.hpp"
#include "pmrlab/trainers.hpp"
#include "run_config.hpp"

namespace pmrlab {
namespace {

namespace fs = std::filesystem;

// Writes `text` to a fresh file under the system temp directory and
// returns its path. Each call gets a distinct name.
std::string write_temp(const std::string& text) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "pmrlab_harness_test";
  fs::create_directories(dir);
  const fs::path p = dir / ("cfg" + std::to_string(counter++) + ".txt");
  std::ofstream out(p);
  out << text;
  out.close();
  return p.string();
}

TEST_CASE("defaults match the documented desk scale") {
  RunConfig cfg;
  CHECK(cfg.data_dir == "data");
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.seed == 1);
  CHECK(cfg.epochs == 30);
  CHECK(cfg.episodes_per_epoch == 1500);
  CHECK(cfg.optimizer == "sgd");
  CHECK(cfg.hidden == 64);
  CHECK(cfg.embed == 16);
  CHECK(cfg.omega_max == 10.0);
  CHECK(cfg.fixed_passes == 3);
  CHECK(cfg.baseline_decay == 0.99);
  CHECK(cfg.max_rounds == kPlayMaxRounds);
  CHECK(cfg.max_qlen == kMaxQuestionLen);
  CHECK(cfg.n_train == 3000);
  CHECK(cfg.n_val == 1000);
  CHECK(cfg.n_test == 1000);
  CHECK(cfg.toggles.rf);
  CHECK(cfg.toggles.is);
  CHECK(cfg.toggles.pm);
  CHECK(cfg.toggles.ub);
  CHECK(cfg.toggles.lb);
  CHECK(cfg.toggles.pb);
  CHECK(cfg.toggles.es);
}

TEST_CASE("every documented key is settable") {
  RunConfig cfg;
  cfg.set("data_dir", "/tmp/d");
  cfg.set("out_dir", "/tmp/o");
  cfg.set("seed", "42");
  cfg.set("epochs", "7");
  cfg.set("episodes_per_epoch", "10");
  cfg.set("lr", "0.25");
  cfg.set("optimizer", "adam");
  cfg.set("hidden", "8");
  cfg.set("embed", "4");
  cfg.set("omega_max", "3.5");
  cfg.set("n_max", "0");
  cfg.set("fixed_passes", "2");
  cfg.set("baseline_decay", "0.5");
  cfg.set("max_rounds", "2");
  cfg.set("max_qlen", "5");
  cfg.set("n_train", "12");
  cfg.set("n_val", "6");
  cfg.set("n_test", "6");
  cfg.set("toggles.rf", "on");
  cfg.set("toggles.is", "off");
  cfg.set("toggles.pm", "1");
  cfg.set("toggles.ub", "0");
  cfg.set("toggles.lb", "true");
  cfg.set("toggles.pb", "false");
  cfg.set("toggles.es", "off");

  CHECK(cfg.data_dir == "/tmp/d");
  CHECK(cfg.out_dir == "/tmp/o");
  CHECK(cfg.seed == 42);
  CHECK(cfg.epochs == 7);
  CHECK(cfg.episodes_per_epoch == 10);
  CHECK(cfg.lr == 0.25);
  CHECK(cfg.optimizer == "adam");
  CHECK(cfg.hidden == 8);
  CHECK(cfg.embed == 4);
  CHECK(cfg.omega_max == 3.5);
  CHECK(cfg.n_max == 0);
  CHECK(cfg.fixed_passes == 2);
  CHECK(cfg.baseline_decay == 0.5);
  CHECK(cfg.max_rounds == 2);
  CHECK(cfg.max_qlen == 5);
  CHECK(cfg.n_train == 12);
  CHECK(cfg.n_val == 6);
  CHECK(cfg.n_test == 6);
  CHECK(cfg.toggles.rf);
  CHECK_FALSE(cfg.toggles.is);
  CHECK(cfg.toggles.pm);
  CHECK_FALSE(cfg.toggles.ub);
  CHECK(cfg.toggles.lb);
  CHECK_FALSE(cfg.toggles.pb);
  CHECK_FALSE(cfg.toggles.es);
}

TEST_CASE("unknown key is a hard error") {
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(cfg.set("learning_rate", "0.1"),
                       "config: unknown key 'learning_rate'", ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("", "x"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("toggles.xx", "on"), ConfigInvalid);
}

TEST_CASE("malformed numbers are rejected with the offending value") {
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(cfg.set("epochs", "abc"),
                       "config: bad value for epochs: 'abc'", ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("epochs", "3x"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("epochs", ""), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("lr", "fast"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("seed", "-1"), ConfigInvalid);
  // Unchanged on failure.
  CHECK(cfg.epochs == 30);
  CHECK(cfg.lr == RunConfig{}.lr);
  CHECK(cfg.seed == 1);
}

TEST_CASE("out-of-range values are rejected per key") {
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(cfg.set("epochs", "-1"),
                       "config: epochs must be >= 0", ConfigInvalid);
  CHECK_NOTHROW(cfg.set("epochs", "0"));
  CHECK_THROWS_AS(cfg.set("episodes_per_epoch", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("lr", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("lr", "-0.5"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("optimizer", "adamw"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("hidden", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("embed", "0"), ConfigInvalid);
  CHECK_THROWS_WITH_AS(cfg.set("omega_max", "0.99"),
                       "config: omega_max must be >= 1", ConfigInvalid);
  CHECK_NOTHROW(cfg.set("omega_max", "1"));
  CHECK_THROWS_WITH_AS(cfg.set("n_max", "-1"), "config: n_max must be >= 0",
                       ConfigInvalid);
  CHECK_NOTHROW(cfg.set("n_max", "0"));
  CHECK_THROWS_AS(cfg.set("fixed_passes", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("baseline_decay", "1"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("baseline_decay", "-0.1"), ConfigInvalid);
  CHECK_NOTHROW(cfg.set("baseline_decay", "0"));
  CHECK_THROWS_AS(cfg.set("max_rounds", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("max_qlen", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("n_train", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("n_val", "0"), ConfigInvalid);
  CHECK_THROWS_AS(cfg.set("n_test", "0"), ConfigInvalid);
}

TEST_CASE("boolean values accept three spellings per polarity") {
  RunConfig cfg;
  for (const char* v : {"true", "on", "1"}) {
    cfg.set("toggles.pb", "off");
    cfg.set("toggles.pb", v);
    CHECK(cfg.toggles.pb);
  }
  for (const char* v : {"false", "off", "0"}) {
    cfg.set("toggles.pb", "on");
    cfg.set("toggles.pb", v);
    CHECK_FALSE(cfg.toggles.pb);
  }
  CHECK_THROWS_WITH_AS(cfg.set("toggles.es", "yes"),
                       "config: bad boolean for toggles.es: 'yes'",
                       ConfigInvalid);
}

TEST_CASE("was_set reflects explicit assignment only") {
  RunConfig cfg;
  CHECK_FALSE(cfg.was_set("lr"));
  CHECK_FALSE(cfg.was_set("optimizer"));
  cfg.set("lr", "0.1");
  CHECK(cfg.was_set("lr"));
  CHECK_FALSE(cfg.was_set("optimizer"));
  // A failed assignment does not mark the key.
  CHECK_THROWS_AS(cfg.set("epochs", "-3"), ConfigInvalid);
  CHECK_FALSE(cfg.was_set("epochs"));
}

TEST_CASE("config files support comments, blanks and spacing") {
  const std::string path = write_temp(
      "# run shape\n"
      "\n"
      "  epochs = 4   # inline comment\n"
      "lr=0.125\n"
      "\ttoggles.es\t=\toff\n"
      "data_dir = /tmp/spaced dir\n");
  RunConfig cfg;
  cfg.load_file(path);
  CHECK(cfg.epochs == 4);
  CHECK(cfg.lr == 0.125);
  CHECK_FALSE(cfg.toggles.es);
  CHECK(cfg.data_dir == "/tmp/spaced dir");
  CHECK(cfg.was_set("epochs"));
  CHECK_FALSE(cfg.was_set("seed"));
}

TEST_CASE("config file errors carry the line number") {
  const std::string path = write_temp(
      "epochs = 4\n"
      "\n"
      "this line has no equals sign\n");
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(cfg.load_file(path),
                       ("config: " + path + ":3: expected key = value").c_str(),
                       ConfigInvalid);
}

TEST_CASE("missing config file reports an I/O failure") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.load_file("/nonexistent/pmrlab.cfg"), IoFailure);
}

TEST_CASE("set_from_flag parses key=value and splits at the first equals") {
  RunConfig cfg;
  cfg.set_from_flag("epochs=9");
  CHECK(cfg.epochs == 9);
  cfg.set_from_flag(" lr = 0.5 ");
  CHECK(cfg.lr == 0.5);
  cfg.set_from_flag("data_dir=a=b");
  CHECK(cfg.data_dir == "a=b");
  CHECK_THROWS_WITH_AS(cfg.set_from_flag("epochs"),
                       "--set expects key=value, got 'epochs'", ConfigInvalid);
}

TEST_CASE("later assignments override earlier ones") {
  const std::string path = write_temp("lr = 0.3\nseed = 7\n");
  RunConfig cfg;
  cfg.load_file(path);
  cfg.set_from_flag("lr=0.7");
  cfg.set("seed", "11");
  CHECK(cfg.lr == 0.7);
  CHECK(cfg.seed == 11);
}

TEST_CASE("derived configs carry the fields over") {
  RunConfig cfg;
  cfg.set("hidden", "24");
  cfg.set("embed", "12");
  cfg.set("optimizer", "adam");
  cfg.set("omega_max", "5");
  cfg.set("n_max", "3");
  cfg.set("seed", "99");

  const PolicyConfig pc = cfg.policy_config();
  CHECK(pc.hidden == 24);
  CHECK(pc.embed == 12);

  CHECK(cfg.optimizer_kind() == OptimizerKind::kAdam);
  cfg.set("optimizer", "sgd");
  CHECK(cfg.optimizer_kind() == OptimizerKind::kSgd);

  const TrainConfig tc = cfg.train_config();
  CHECK(tc.epochs == cfg.epochs);
  CHECK(tc.episodes_per_epoch == cfg.episodes_per_epoch);
  CHECK(tc.lr == cfg.lr);
  CHECK(tc.optimizer == OptimizerKind::kSgd);
  CHECK(tc.omega_max == 5.0);
  CHECK(tc.n_max == 3);
  CHECK(tc.fixed_passes == cfg.fixed_passes);
  CHECK(tc.baseline_decay == cfg.baseline_decay);
  CHECK(tc.max_rounds == cfg.max_rounds);
  CHECK(tc.max_qlen == cfg.max_qlen);
  CHECK(tc.seed == 99);
  CHECK(tc.toggles.rf);
}

TEST_CASE("train_config enforces toggle consistency") {
  RunConfig cfg;
  cfg.set("toggles.rf", "off");
  cfg.set("toggles.is", "on");
  CHECK_THROWS_AS(cfg.train_config(), ConfigInvalid);
  cfg.set("toggles.is", "off");
  CHECK_NOTHROW(cfg.train_config());
}

}  // namespace
}  // namespace pmrlab
