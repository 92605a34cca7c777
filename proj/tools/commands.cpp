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

#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "pmrlab/checkpoint.hpp"
#include "pmrlab/dataset.hpp"
#include "pmrlab/errors.hpp"
#include "pmrlab/metrics.hpp"
#include "pmrlab/questioner.hpp"
#include "pmrlab/trainers.hpp"

namespace pmrlab {

namespace {

// Stream tag for evaluations launched from the command line, distinct
// from the trainer-internal evaluation streams.
constexpr uint64_t kStreamCliEval = 0x636c69;

std::vector<GameRecord> load_split(const std::string& data_dir,
                                   const std::string& split) {
  return load_records(data_dir + "/" + split + ".jsonl");
}

// Builds a policy shaped like the checkpoint and loads it. An explicitly
// configured hidden/embed that contradicts the file is a config error.
QuestionerPolicy policy_from_checkpoint(const RunConfig& cfg,
                                        const std::string& ckpt_path) {
  const PolicyConfig shape = checkpoint_policy_config(ckpt_path);
  if (cfg.was_set("hidden") && cfg.hidden != shape.hidden) {
    throw ConfigInvalid("config hidden=" + std::to_string(cfg.hidden) +
                        " but checkpoint has hidden=" +
                        std::to_string(shape.hidden));
  }
  if (cfg.was_set("embed") && cfg.embed != shape.embed) {
    throw ConfigInvalid("config embed=" + std::to_string(cfg.embed) +
                        " but checkpoint has embed=" +
                        std::to_string(shape.embed));
  }
  QuestionerPolicy policy(shape, 0);
  load_checkpoint(policy.params(), ckpt_path);
  return policy;
}

double test_success_of(const ParamStore& params, const PolicyConfig& shape,
                       const std::vector<GridImage>& test_grids,
                       const TrainConfig& tc, uint64_t seed) {
  QuestionerPolicy best(shape, 0);
  best.params().copy_values_from(params);
  PolicyAgent agent(best);
  return evaluate(agent, test_grids, tc.max_rounds, tc.max_qlen,
                  mix_seed(seed, kStreamCliEval));
}

}  // namespace

int cmd_generate(const RunConfig& cfg) {
  generate_dataset(cfg.n_train, cfg.n_val, cfg.n_test, cfg.seed, cfg.out_dir);
  std::printf("wrote %d train / %d val / %d test records to %s\n",
              cfg.n_train, cfg.n_val, cfg.n_test, cfg.out_dir.c_str());
  return 0;
}

int cmd_pretrain(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (!cfg.was_set("lr")) c.lr = 1e-3;
  if (!cfg.was_set("optimizer")) c.optimizer = "adam";

  const auto train = load_split(c.data_dir, "train");
  const auto val = load_split(c.data_dir, "val");

  PretrainConfig pc;
  pc.epochs = c.epochs;
  pc.lr = c.lr;
  pc.optimizer = c.optimizer_kind();
  pc.max_rounds = c.max_rounds;
  pc.max_qlen = c.max_qlen;
  pc.seed = c.seed;
  pc.validate();

  QuestionerPolicy policy(c.policy_config(), c.seed);

  std::filesystem::create_directories(c.out_dir);
  CsvWriter csv(c.out_dir + "/pretrain_metrics.csv", pretrain_csv_header());
  PretrainResult result =
      mle_pretrain(policy, pc, train, val, [&](const PretrainEpoch& e) {
        csv.append(pretrain_csv_row(e));
        std::printf("epoch %3d  train ppl %8.4f  val ppl %8.4f  "
                    "val success %.4f\n",
                    e.epoch, e.train_perplexity, e.val_perplexity,
                    e.val_success);
        std::fflush(stdout);
      });

  const std::string ckpt = c.out_dir + "/pretrain.ckpt";
  save_checkpoint(result.best_params, ckpt);
  std::printf("best val success %.4f, checkpoint %s\n",
              result.best_val_success, ckpt.c_str());
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& mode,
              const std::string& ckpt_path) {
  const auto train = load_split(cfg.data_dir, "train");
  const auto val = load_split(cfg.data_dir, "val");
  const auto test = load_split(cfg.data_dir, "test");

  QuestionerPolicy policy = policy_from_checkpoint(cfg, ckpt_path);
  TrainConfig tc = cfg.train_config();
  if (mode == "reinforce") {
    tc.toggles = Toggles{true, false, false, false, false, false, false};
  }

  std::filesystem::create_directories(cfg.out_dir);
  CsvWriter csv(cfg.out_dir + "/metrics.csv", metrics_csv_header());
  TrainResult result = pmr_train(policy, tc, grids_of(train), grids_of(val),
                                 [&](const EpochMetrics& m) {
                                   csv.append(metrics_csv_row(m));
                                   std::printf(
                                       "epoch %3d  train %.4f  val %.4f  "
                                       "memory %4d  passes %d  reuse %.3f\n",
                                       m.epoch, m.train_success, m.val_success,
                                       m.memory_size, m.retention_passes,
                                       m.reuse_ratio);
                                   std::fflush(stdout);
                                 });

  save_checkpoint(result.best_params, cfg.out_dir + "/best.ckpt");
  const double test_s = test_success_of(result.best_params, policy.config(),
                                        grids_of(test), tc, cfg.seed);
  const double final_val = result.metrics.empty()
                               ? result.best_val
                               : result.metrics.back().val_success;
  std::printf("final val %.4f  best val %.4f  test(best) %.4f\n", final_val,
              result.best_val, test_s);
  return 0;
}

int cmd_ablate(const RunConfig& cfg, const std::string& ckpt_path) {
  RunConfig c = cfg;
  // The ablation grid is reported after a short training budget; override
  // epochs in the config to lengthen it.
  if (!cfg.was_set("epochs")) c.epochs = 10;

  const auto train = load_split(c.data_dir, "train");
  const auto val = load_split(c.data_dir, "val");
  const auto test = load_split(c.data_dir, "test");
  const auto train_grids = grids_of(train);
  const auto val_grids = grids_of(val);
  const auto test_grids = grids_of(test);

  const PolicyConfig shape = checkpoint_policy_config(ckpt_path);

  struct RowSpec {
    int id;
    Toggles t;
    double omega;
  };
  const Toggles all{true, true, true, true, true, true, true};
  std::vector<RowSpec> rows;
  rows.push_back({1, Toggles{false, false, false, false, false, false, false},
                  c.omega_max});
  rows.push_back({2, Toggles{true, false, false, false, false, false, false},
                  c.omega_max});
  rows.push_back({3, Toggles{true, true, false, false, false, false, false},
                  c.omega_max});
  rows.push_back({4, Toggles{true, true, true, false, false, false, false},
                  c.omega_max});
  rows.push_back({5, Toggles{true, true, false, true, false, false, false},
                  c.omega_max});
  rows.push_back({6, Toggles{true, true, false, true, true, false, false},
                  c.omega_max});
  rows.push_back({7, Toggles{true, true, true, true, true, false, false},
                  c.omega_max});
  rows.push_back({8, Toggles{true, true, true, true, true, true, false},
                  c.omega_max});
  rows.push_back({9, all, c.omega_max});
  for (double omega : {1.0, 5.0, 10.0, 20.0, 30.0, 100.0}) {
    rows.push_back({static_cast<int>(rows.size()) + 1, all, omega});
  }

  std::filesystem::create_directories(c.out_dir);
  CsvWriter csv(c.out_dir + "/ablation.csv",
                "row_id,toggles,omega_max,test_success");

  std::printf("%-3s  %-24s  %9s  %s\n", "row", "toggles", "omega_max",
              "test_success");
  bool any_failed = false;
  for (const RowSpec& row : rows) {
    std::string label = toggles_label(row.t);
    char omega_buf[32];
    std::snprintf(omega_buf, sizeof(omega_buf), "%g", row.omega);
    try {
      QuestionerPolicy policy(shape, 0);
      load_checkpoint(policy.params(), ckpt_path);
      TrainConfig tc = c.train_config();
      tc.toggles = row.t;
      tc.omega_max = row.omega;
      // The all-off row is the pretrained model itself; nothing to train.
      if (!row.t.rf) tc.epochs = 0;
      TrainResult res = pmr_train(policy, tc, train_grids, val_grids);
      const double ts = test_success_of(res.best_params, shape, test_grids,
                                        tc, c.seed);
      char ts_buf[32];
      std::snprintf(ts_buf, sizeof(ts_buf), "%.6f", ts);
      csv.append(std::to_string(row.id) + "," + label + "," + omega_buf +
                 "," + ts_buf);
      std::printf("%-3d  %-24s  %9s  %s\n", row.id, label.c_str(), omega_buf,
                  ts_buf);
    } catch (const std::exception& e) {
      any_failed = true;
      csv.append(std::to_string(row.id) + "," + label + "," + omega_buf +
                 ",nan");
      std::printf("%-3d  %-24s  %9s  FAILED (%s)\n", row.id, label.c_str(),
                  omega_buf, e.what());
    }
    std::fflush(stdout);
  }
  return any_failed ? 3 : 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& ckpt_path,
             const std::string& split) {
  if (split != "train" && split != "val" && split != "test") {
    throw ConfigInvalid("split must be train, val or test, got '" + split +
                        "'");
  }
  const auto records = load_split(cfg.data_dir, split);
  QuestionerPolicy policy = policy_from_checkpoint(cfg, ckpt_path);
  PolicyAgent agent(policy);
  const double s = evaluate(agent, grids_of(records), cfg.max_rounds,
                            cfg.max_qlen, mix_seed(cfg.seed, kStreamCliEval));
  std::printf("success %.6f on %zu games (%s)\n", s, records.size(),
              split.c_str());
  return 0;
}

}  // namespace pmrlab
