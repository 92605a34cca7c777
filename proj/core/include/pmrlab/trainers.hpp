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

#ifndef PMRLAB_TRAINERS_HPP_
#define PMRLAB_TRAINERS_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "pmrlab/dataset.hpp"
#include "pmrlab/questioner.hpp"

namespace pmrlab {

// Global gradient-norm clip applied before every policy update. RL steps
// occasionally spike without it.
inline constexpr double kGradClipNorm = 5.0;

// Feature switches of the retention trainer, all on by default. rf:
// policy-gradient updates from fresh episodes. is: importance-weighted
// retention from the memory buffer. pm: keep only reward-1 episodes in
// memory (otherwise all, with their rewards). ub/lb: upper/lower trust
// region bound on the importance weight. pb: refresh stored probabilities
// to the current policy during retention, before the bound check. es:
// validation-driven early stopping of retention passes with revert to the
// best parameters (off: a fixed number of passes, no revert).
struct Toggles {
  bool rf = true;
  bool is = true;
  bool pm = true;
  bool ub = true;
  bool lb = true;
  bool pb = true;
  bool es = true;
};

struct TrainConfig {
  int epochs = 30;
  int episodes_per_epoch = 1500;
  double lr = 0.05;
  OptimizerKind optimizer = OptimizerKind::kSgd;
  double omega_max = 10.0;
  int n_max = 2;        // early-stop after this many non-improving passes
  int fixed_passes = 3; // retention passes per epoch when es is off
  double baseline_decay = 0.99;
  int max_rounds = kPlayMaxRounds;
  int max_qlen = kMaxQuestionLen;
  Toggles toggles;
  uint64_t seed = 0;
  // Real epoch wall times make artifacts run-dependent, so the metrics
  // column is 0 unless explicitly requested.
  bool record_timing = false;

  // Throws ConfigInvalid on out-of-range values or inconsistent toggles
  // (importance-weighted retention requires the on-policy phase).
  void validate() const;
};

// Exponential moving average of episode rewards; stays in [0,1] for
// rewards in {0,1}.
class BaselineEMA {
 public:
  explicit BaselineEMA(double decay) : decay_(decay) {}
  double value() const { return value_; }
  void update(int r) { value_ = decay_ * value_ + (1.0 - decay_) * r; }

 private:
  double decay_;
  double value_ = 0.0;
};

// One remembered episode. stored_probs is aligned with tokens (0 at
// unmasked positions) and holds the behavior policy's action
// probabilities; probability updating overwrites it in place.
struct MemoryEntry {
  GridImage grid;
  std::vector<Token> tokens;
  std::vector<uint8_t> mask;
  std::vector<double> stored_probs;
  int reward = 0;
};

// Episode memory for one epoch, insertion order preserved.
class MemoryBuffer {
 public:
  void clear(int epoch) {
    entries_.clear();
    epoch_ = epoch;
  }
  void push(MemoryEntry entry) { entries_.push_back(std::move(entry)); }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  int epoch() const { return epoch_; }
  std::vector<MemoryEntry>& entries() { return entries_; }
  const std::vector<MemoryEntry>& entries() const { return entries_; }

 private:
  std::vector<MemoryEntry> entries_;
  int epoch_ = 0;
};

MemoryEntry memory_entry_from(const Trajectory& traj);

// One ascent step on loss -coeff * sum(log p_t) over masked positions:
// backward, global-norm clip, optimizer step. REINFORCE and retention
// both funnel through here, which is what makes a retention step at
// omega = 1 bit-identical to the plain REINFORCE step.
void apply_policy_gradient_step(QuestionerPolicy& policy,
                                const QuestionerPolicy::ScoreResult& scored,
                                const std::vector<Token>& tokens,
                                const std::vector<uint8_t>& mask, double coeff,
                                Optimizer& opt);

// On-policy step with coefficient (r - b).
void reinforce_update(QuestionerPolicy& policy, const Trajectory& traj,
                      double baseline, Optimizer& opt);

// omega = exp(sum log p - sum log q) over action probabilities; log-space
// throughout so long trajectories cannot overflow the product.
// p and q are compact per-action vectors. Throws LengthMismatch.
double log_importance_weight(const std::vector<double>& p,
                             const std::vector<double>& q);
double importance_weight(const std::vector<double>& p,
                         const std::vector<double>& q);

// Closed-interval trust region [1/omega_max, omega_max], decided in log
// space (log omega against +-log(omega_max)); boundary values accepted.
bool trust_region_check(double omega, double omega_max);
bool trust_region_check_log(double log_omega, double omega_max,
                            bool upper_bound, bool lower_bound);

// Jensen-Shannon divergence, natural log, 0*log(0/x) = 0 convention.
// Diagnostic only; never gates training. Throws SupportMismatch.
double js_divergence(const std::vector<double>& p,
                     const std::vector<double>& q);

struct RetentionStats {
  int visited = 0;
  int accepted = 0;
  // Applied updates whose log omega lay outside +-log(omega_max). With
  // both bounds on this must stay 0; kept as an audited counter rather
  // than an assumption.
  int applied_out_of_region = 0;
  double mean_abs_log_omega = 0.0;
  double mean_js = 0.0;
  std::vector<double> log_omegas;  // one per visited entry, in order
};

// One sequential sweep over the memory: per entry, score under the
// current parameters, refresh stored probabilities (pb), compute omega
// against the stored behavior probabilities, and apply the
// omega-weighted step when the trust region admits it. Later entries see
// earlier updates. The baseline is frozen for the whole pass.
RetentionStats retention_pass(QuestionerPolicy& policy, MemoryBuffer& memory,
                              const TrainConfig& cfg, double baseline,
                              Optimizer& opt);

// Mean reward of one rollout per grid; targets cycle deterministically
// (grid i gets target i mod 9) and each grid gets an rng stream derived
// from eval_seed, so the result is independent of evaluation order.
double evaluate(RolloutAgent& agent, const std::vector<GridImage>& grids,
                int max_rounds, int max_qlen, uint64_t eval_seed);

struct EpochMetrics {
  int epoch = 0;             // 1-based
  long long env_samples = 0; // cumulative training rollouts
  double train_success = 0.0;
  double val_success = 0.0;  // validation score of the epoch's final params
  int memory_size = 0;
  int retention_passes = 0;
  double reuse_ratio = 0.0;  // accepted / visited across the epoch's passes
  long long wall_ms = 0;
};

struct RetentionAudit {
  long long visited = 0;
  long long accepted = 0;
  long long applied_out_of_region = 0;
};

struct TrainResult {
  std::vector<EpochMetrics> metrics;
  // Best-validation parameters (model selection over the per-epoch
  // validations); the input parameters when no epoch ran.
  ParamStore best_params;
  double best_val = -1.0;
  RetentionAudit audit;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

// The retention training loop. Per epoch: (1) episodes_per_epoch rollouts
// on training grids with random targets, each applying the on-policy
// update (rf) and feeding the memory (is, filtered by pm); (2) with es
// on, validate and anchor theta' to the post-episode parameters, then
// retention passes, validating after each, until n_max consecutive
// passes fail to improve, finally reverting to the best anchored
// parameters; with es off, exactly fixed_passes retention passes with no
// validation and no revert (divergence is observable); (3) one
// end-of-epoch validation recorded as the epoch's val_success and used
// for best-checkpoint selection; (4) memory cleared. Fully deterministic
// given (config, seed); epochs = 0 returns the input policy unchanged.
TrainResult pmr_train(QuestionerPolicy& policy, const TrainConfig& cfg,
                      const std::vector<GridImage>& train_grids,
                      const std::vector<GridImage>& val_grids,
                      const EpochCallback& on_epoch = nullptr);

struct PretrainConfig {
  int epochs = 30;
  double lr = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  int max_rounds = kPlayMaxRounds;
  int max_qlen = kMaxQuestionLen;
  uint64_t seed = 0;

  void validate() const;
};

struct PretrainEpoch {
  int epoch = 0;
  double train_perplexity = 0.0;  // streaming, per question token
  double val_perplexity = 0.0;
  double val_success = 0.0;
};

struct PretrainResult {
  std::vector<PretrainEpoch> epochs;
  ParamStore best_params;  // best validation success, ties keep earlier
  double best_val_success = -1.0;
};

using PretrainCallback = std::function<void(const PretrainEpoch&)>;

// Maximum-likelihood pretraining on scripted games, one game per step,
// epoch-shuffled. Validation perplexity and game success are measured
// every epoch; the best-success parameters are returned.
PretrainResult mle_pretrain(QuestionerPolicy& policy,
                            const PretrainConfig& cfg,
                            const std::vector<GameRecord>& train,
                            const std::vector<GameRecord>& val,
                            const PretrainCallback& on_epoch = nullptr);

// Grids of a record list, in order (evaluation operates on grids).
std::vector<GridImage> grids_of(const std::vector<GameRecord>& records);

}  // namespace pmrlab

#endif  // PMRLAB_TRAINERS_HPP_
