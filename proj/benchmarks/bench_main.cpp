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

#include <benchmark/benchmark.h>

#include <vector>

#include "pmrlab/dataset.hpp"
#include "pmrlab/nn_ops.hpp"
#include "pmrlab/questioner.hpp"
#include "pmrlab/trainers.hpp"

namespace pmrlab {
namespace {

void fill_uniform(Matrix& m, Rng& rng) {
  for (size_t k = 0; k < m.size(); ++k) {
    m.data()[k] = rng.uniform_range(-0.1, 0.1);
  }
}

void BM_LstmStepForward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  const int embed = 16;
  Rng rng(7);
  Matrix w(4 * hidden, embed + hidden);
  Matrix b(4 * hidden, 1);
  fill_uniform(w, rng);
  std::vector<double> x(embed), h(hidden), c(hidden);
  for (double& v : x) v = rng.uniform_range(-1.0, 1.0);
  LstmStepCache cache;
  cache.resize(hidden);
  for (auto _ : state) {
    lstm_step_forward(w, b, x.data(), embed, h.data(), c.data(), cache);
    h = cache.h;
    c = cache.c;
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_LstmStepForward)->Arg(64)->Arg(128);

void BM_LstmStepBackward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  const int embed = 16;
  Rng rng(7);
  Matrix w(4 * hidden, embed + hidden);
  Matrix b(4 * hidden, 1);
  fill_uniform(w, rng);
  std::vector<double> x(embed), h(hidden), c(hidden);
  for (double& v : x) v = rng.uniform_range(-1.0, 1.0);
  LstmStepCache cache;
  cache.resize(hidden);
  lstm_step_forward(w, b, x.data(), embed, h.data(), c.data(), cache);

  Matrix dw(4 * hidden, embed + hidden);
  Matrix db(4 * hidden, 1);
  std::vector<double> dh(hidden, 0.01), dc(hidden, 0.0);
  std::vector<double> dx(embed), dh_prev(hidden), dc_prev(hidden);
  for (auto _ : state) {
    lstm_step_backward(w, x.data(), embed, cache, dh.data(), dc.data(), dw,
                       db, dx.data(), dh_prev.data(), dc_prev.data());
    benchmark::DoNotOptimize(dw.data());
  }
}
BENCHMARK(BM_LstmStepBackward)->Arg(64)->Arg(128);

void BM_ScriptedGame(benchmark::State& state) {
  Rng grid_rng(11);
  GridImage grid = generate_grid(grid_rng);
  Rng rng(13);
  for (auto _ : state) {
    GameRecord record = generate_game(grid, 4, rng);
    benchmark::DoNotOptimize(record.dialog.data());
  }
}
BENCHMARK(BM_ScriptedGame);

void BM_PolicyRollout(benchmark::State& state) {
  QuestionerPolicy policy(PolicyConfig{}, 3);
  PolicyAgent agent(policy);
  Rng grid_rng(11);
  GridImage grid = generate_grid(grid_rng);
  Rng rng(17);
  for (auto _ : state) {
    Trajectory traj = rollout(agent, grid, 4, kPlayMaxRounds,
                              kMaxQuestionLen, rng);
    benchmark::DoNotOptimize(traj.probs.data());
  }
}
BENCHMARK(BM_PolicyRollout);

void BM_ReinforceUpdate(benchmark::State& state) {
  QuestionerPolicy policy(PolicyConfig{}, 3);
  PolicyAgent agent(policy);
  Rng grid_rng(11);
  GridImage grid = generate_grid(grid_rng);
  Rng rng(17);
  Trajectory traj = rollout(agent, grid, 4, kPlayMaxRounds, kMaxQuestionLen,
                            rng);
  Optimizer opt(OptimizerKind::kSgd, 1e-3);
  for (auto _ : state) {
    reinforce_update(policy, traj, 0.5, opt);
  }
}
BENCHMARK(BM_ReinforceUpdate);

void BM_RetentionPass(benchmark::State& state) {
  QuestionerPolicy policy(PolicyConfig{}, 3);
  PolicyAgent agent(policy);
  TrainConfig cfg;
  cfg.lr = 1e-4;
  Optimizer opt(cfg.optimizer, cfg.lr);
  MemoryBuffer memory;
  memory.clear(1);
  Rng rng(19);
  for (int i = 0; i < 64; ++i) {
    Rng grid_rng(100 + i);
    GridImage grid = generate_grid(grid_rng);
    Trajectory traj = rollout(agent, grid, i % kGridCells, kPlayMaxRounds,
                              kMaxQuestionLen, rng);
    memory.push(memory_entry_from(traj));
  }
  for (auto _ : state) {
    RetentionStats stats = retention_pass(policy, memory, cfg, 0.5, opt);
    benchmark::DoNotOptimize(stats.accepted);
  }
}
BENCHMARK(BM_RetentionPass)->Unit(benchmark::kMillisecond);

void BM_DatasetGeneration(benchmark::State& state) {
  for (auto _ : state) {
    DatasetSplits splits = generate_splits(64, 16, 16, 23);
    benchmark::DoNotOptimize(splits.train.data());
  }
}
BENCHMARK(BM_DatasetGeneration)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pmrlab

BENCHMARK_MAIN();
