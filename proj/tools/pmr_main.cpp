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

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pmrlab/errors.hpp"
#include "run_config.hpp"

namespace {

// Options every command accepts. Precedence: config file, then --set in
// order, then the dedicated flags.
struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string seed;
  std::string out;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--set", sets, "override one config key (key=value)");
    cmd->add_option("--seed", seed, "override the run seed");
    cmd->add_option("--out", out, "override the output directory");
  }

  pmrlab::RunConfig resolve() const {
    pmrlab::RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const std::string& kv : sets) cfg.set_from_flag(kv);
    if (!seed.empty()) cfg.set("seed", seed);
    if (!out.empty()) cfg.set("out_dir", out);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmr: attribute guessing games, a recurrent questioner and "
               "memory-retention policy gradient training"};
  app.require_subcommand(1);

  CommonArgs generate_args, pretrain_args, reinforce_args, pmr_args,
      ablate_args, eval_args;

  CLI::App* c_generate =
      app.add_subcommand("generate", "generate dataset splits");
  generate_args.add_to(c_generate);
  std::string g_train, g_val, g_test;
  c_generate->add_option("--train", g_train, "training split size");
  c_generate->add_option("--val", g_val, "validation split size");
  c_generate->add_option("--test", g_test, "test split size");

  CLI::App* c_pretrain = app.add_subcommand(
      "pretrain", "maximum-likelihood pretraining on scripted games");
  pretrain_args.add_to(c_pretrain);

  std::string reinforce_ckpt, pmr_ckpt, ablate_ckpt;
  CLI::App* c_reinforce = app.add_subcommand(
      "reinforce", "on-policy policy-gradient training");
  reinforce_args.add_to(c_reinforce);
  c_reinforce->add_option("--ckpt", reinforce_ckpt,
                          "pretrained checkpoint (default "
                          "<out_dir>/pretrain.ckpt)");

  CLI::App* c_pmr = app.add_subcommand(
      "pmr", "policy-gradient training with memory retention");
  pmr_args.add_to(c_pmr);
  c_pmr->add_option("--ckpt", pmr_ckpt,
                    "pretrained checkpoint (default <out_dir>/pretrain.ckpt)");

  CLI::App* c_ablate = app.add_subcommand(
      "ablate", "run the 15-row toggle/omega_max ablation grid");
  ablate_args.add_to(c_ablate);
  c_ablate->add_option("--ckpt", ablate_ckpt,
                       "pretrained checkpoint (default "
                       "<out_dir>/pretrain.ckpt)");

  CLI::App* c_eval =
      app.add_subcommand("eval", "evaluate a checkpoint on a split");
  eval_args.add_to(c_eval);
  std::string eval_ckpt, eval_split;
  c_eval->add_option("checkpoint", eval_ckpt, "checkpoint file")->required();
  c_eval->add_option("split", eval_split, "train, val or test")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_generate->parsed()) {
      pmrlab::RunConfig cfg = generate_args.resolve();
      if (!g_train.empty()) cfg.set("n_train", g_train);
      if (!g_val.empty()) cfg.set("n_val", g_val);
      if (!g_test.empty()) cfg.set("n_test", g_test);
      return pmrlab::cmd_generate(cfg);
    }
    if (c_pretrain->parsed()) {
      return pmrlab::cmd_pretrain(pretrain_args.resolve());
    }
    if (c_reinforce->parsed()) {
      pmrlab::RunConfig cfg = reinforce_args.resolve();
      const std::string ckpt = reinforce_ckpt.empty()
                                   ? cfg.out_dir + "/pretrain.ckpt"
                                   : reinforce_ckpt;
      return pmrlab::cmd_train(cfg, "reinforce", ckpt);
    }
    if (c_pmr->parsed()) {
      pmrlab::RunConfig cfg = pmr_args.resolve();
      const std::string ckpt =
          pmr_ckpt.empty() ? cfg.out_dir + "/pretrain.ckpt" : pmr_ckpt;
      return pmrlab::cmd_train(cfg, "pmr", ckpt);
    }
    if (c_ablate->parsed()) {
      pmrlab::RunConfig cfg = ablate_args.resolve();
      const std::string ckpt =
          ablate_ckpt.empty() ? cfg.out_dir + "/pretrain.ckpt" : ablate_ckpt;
      return pmrlab::cmd_ablate(cfg, ckpt);
    }
    if (c_eval->parsed()) {
      return pmrlab::cmd_eval(eval_args.resolve(), eval_ckpt, eval_split);
    }
  } catch (const pmrlab::ConfigInvalid& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const pmrlab::IoFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
