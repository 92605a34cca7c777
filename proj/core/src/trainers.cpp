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

#include "pmrlab/trainers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <utility>

#include "pmrlab/errors.hpp"

namespace pmrlab {

namespace {

// Stream tags for deriving sub-generator seeds. Values are arbitrary but
// frozen: every artifact of a seeded run depends on them.
constexpr uint64_t kStreamEpisode = 0x657069;
constexpr uint64_t kStreamEpochEval = 0x65706576;
constexpr uint64_t kStreamEsEval = 0x657365;
constexpr uint64_t kStreamShuffle = 0x73687566;
constexpr uint64_t kStreamPretrainEval = 0x707265;

// Caps |log omega| when materializing the applied weight so that a run
// with the trust region disabled produces huge but finite coefficients
// instead of inf/NaN gradients.
constexpr double kLogOmegaCap = 230.0;

// Early stopping terminates on stagnation; this cap only guards against a
// pathological run where validation keeps improving forever.
constexpr int kMaxEsPasses = 64;

bool timing_enabled(const TrainConfig& cfg) {
  return cfg.record_timing || std::getenv("PMRLAB_TIMING") != nullptr;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigInvalid("epochs must be >= 0");
  if (episodes_per_epoch < 1) {
    throw ConfigInvalid("episodes_per_epoch must be >= 1");
  }
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw ConfigInvalid("lr must be positive and finite");
  }
  if (!(omega_max >= 1.0) || !std::isfinite(omega_max)) {
    throw ConfigInvalid("omega_max must be finite and >= 1");
  }
  if (n_max < 0) throw ConfigInvalid("n_max must be >= 0");
  if (fixed_passes < 1) throw ConfigInvalid("fixed_passes must be >= 1");
  if (!(baseline_decay >= 0.0) || !(baseline_decay < 1.0)) {
    throw ConfigInvalid("baseline_decay must be in [0, 1)");
  }
  if (max_rounds < 1) throw ConfigInvalid("max_rounds must be >= 1");
  if (max_qlen < 1) throw ConfigInvalid("max_qlen must be >= 1");
  if (toggles.is && !toggles.rf) {
    throw ConfigInvalid("retention (is) requires the on-policy phase (rf)");
  }
}

void PretrainConfig::validate() const {
  if (epochs < 0) throw ConfigInvalid("epochs must be >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw ConfigInvalid("lr must be positive and finite");
  }
  if (max_rounds < 1) throw ConfigInvalid("max_rounds must be >= 1");
  if (max_qlen < 1) throw ConfigInvalid("max_qlen must be >= 1");
}

MemoryEntry memory_entry_from(const Trajectory& traj) {
  return MemoryEntry{traj.grid, traj.tokens, traj.action_mask, traj.probs,
                     traj.reward};
}

void apply_policy_gradient_step(QuestionerPolicy& policy,
                                const QuestionerPolicy::ScoreResult& scored,
                                const std::vector<Token>& tokens,
                                const std::vector<uint8_t>& mask, double coeff,
                                Optimizer& opt) {
  std::vector<double> coeffs(tokens.size(), 0.0);
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (mask[t]) coeffs[t] = coeff;
  }
  policy.params().zero_grads();
  policy.accumulate_gradients(scored.cache, tokens, mask, coeffs);
  clip_grad_norm(policy.params(), kGradClipNorm);
  opt.step(policy.params());
}

void reinforce_update(QuestionerPolicy& policy, const Trajectory& traj,
                      double baseline, Optimizer& opt) {
  auto scored = policy.score(traj.grid, traj.tokens, traj.action_mask);
  apply_policy_gradient_step(policy, scored, traj.tokens, traj.action_mask,
                             traj.reward - baseline, opt);
}

double log_importance_weight(const std::vector<double>& p,
                             const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw LengthMismatch("importance weight: p and q lengths differ");
  }
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    sum += std::log(p[i]) - std::log(q[i]);
  }
  return sum;
}

double importance_weight(const std::vector<double>& p,
                         const std::vector<double>& q) {
  return std::exp(log_importance_weight(p, q));
}

bool trust_region_check(double omega, double omega_max) {
  return trust_region_check_log(std::log(omega), omega_max, true, true);
}

bool trust_region_check_log(double log_omega, double omega_max,
                            bool upper_bound, bool lower_bound) {
  if (std::isnan(log_omega)) return false;
  const double bound = std::log(omega_max);
  if (upper_bound && log_omega > bound) return false;
  if (lower_bound && log_omega < -bound) return false;
  return true;
}

double js_divergence(const std::vector<double>& p,
                     const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw SupportMismatch("js divergence: supports differ in size");
  }
  double js = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) js += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) js += 0.5 * q[i] * std::log(q[i] / m);
  }
  return std::max(js, 0.0);
}

RetentionStats retention_pass(QuestionerPolicy& policy, MemoryBuffer& memory,
                              const TrainConfig& cfg, double baseline,
                              Optimizer& opt) {
  RetentionStats stats;
  stats.log_omegas.reserve(memory.size());
  const double log_bound = std::log(cfg.omega_max);
  double abs_sum = 0.0;
  double js_sum = 0.0;

  for (MemoryEntry& entry : memory.entries()) {
    auto scored = policy.score(entry.grid, entry.tokens, entry.mask);

    std::vector<double> p, q;
    p.reserve(entry.tokens.size());
    q.reserve(entry.tokens.size());
    for (size_t t = 0; t < entry.tokens.size(); ++t) {
      if (entry.mask[t]) {
        p.push_back(scored.probs[t]);
        q.push_back(entry.stored_probs[t]);
      }
    }

    // Probability updating: the stored behavior probabilities move to the
    // current policy before the acceptance check and whether or not the
    // update is applied. omega itself is computed against the values held
    // before this refresh.
    if (cfg.toggles.pb) entry.stored_probs = scored.probs;

    const double log_omega = log_importance_weight(p, q);
    ++stats.visited;
    stats.log_omegas.push_back(log_omega);
    abs_sum += std::abs(log_omega);
    if (!p.empty()) {
      const double sp = std::accumulate(p.begin(), p.end(), 0.0);
      const double sq = std::accumulate(q.begin(), q.end(), 0.0);
      std::vector<double> pn(p), qn(q);
      for (double& v : pn) v /= sp;
      for (double& v : qn) v /= sq;
      js_sum += js_divergence(pn, qn);
    }

    if (!trust_region_check_log(log_omega, cfg.omega_max, cfg.toggles.ub,
                                cfg.toggles.lb)) {
      continue;
    }
    ++stats.accepted;
    if (log_omega > log_bound || log_omega < -log_bound) {
      ++stats.applied_out_of_region;
    }
    const double clamped =
        std::min(std::max(log_omega, -kLogOmegaCap), kLogOmegaCap);
    const double omega = std::exp(clamped);
    apply_policy_gradient_step(policy, scored, entry.tokens, entry.mask,
                               omega * (entry.reward - baseline), opt);
  }

  if (stats.visited > 0) {
    stats.mean_abs_log_omega = abs_sum / stats.visited;
    stats.mean_js = js_sum / stats.visited;
  }
  return stats;
}

double evaluate(RolloutAgent& agent, const std::vector<GridImage>& grids,
                int max_rounds, int max_qlen, uint64_t eval_seed) {
  if (grids.empty()) return 0.0;
  double hits = 0.0;
  for (size_t i = 0; i < grids.size(); ++i) {
    Rng rng(mix_seed(eval_seed, i));
    Trajectory traj = rollout(agent, grids[i], static_cast<int>(i % kGridCells),
                              max_rounds, max_qlen, rng);
    hits += traj.reward;
  }
  return hits / static_cast<double>(grids.size());
}

TrainResult pmr_train(QuestionerPolicy& policy, const TrainConfig& cfg,
                      const std::vector<GridImage>& train_grids,
                      const std::vector<GridImage>& val_grids,
                      const EpochCallback& on_epoch) {
  cfg.validate();
  if (train_grids.empty()) throw ConfigInvalid("empty training split");
  if (val_grids.empty()) throw ConfigInvalid("empty validation split");

  TrainResult result;
  result.best_params = policy.params();

  BaselineEMA baseline(cfg.baseline_decay);
  Optimizer opt(cfg.optimizer, cfg.lr);
  MemoryBuffer memory;
  const bool timing = timing_enabled(cfg);
  long long env_samples = 0;

  const auto n_grids = static_cast<uint32_t>(train_grids.size());

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    memory.clear(epoch);

    PolicyAgent agent(policy);
    double reward_sum = 0.0;
    for (int ep = 0; ep < cfg.episodes_per_epoch; ++ep) {
      Rng rng(mix_seed(mix_seed(cfg.seed, kStreamEpisode,
                                static_cast<uint64_t>(epoch)),
                       static_cast<uint64_t>(ep)));
      const GridImage& grid = train_grids[rng.uniform(n_grids)];
      const int target = static_cast<int>(rng.uniform(kGridCells));
      Trajectory traj =
          rollout(agent, grid, target, cfg.max_rounds, cfg.max_qlen, rng);
      ++env_samples;
      reward_sum += traj.reward;
      if (cfg.toggles.rf) {
        reinforce_update(policy, traj, baseline.value(), opt);
      }
      baseline.update(traj.reward);
      if (cfg.toggles.is && (!cfg.toggles.pm || traj.reward == 1)) {
        memory.push(memory_entry_from(traj));
      }
    }

    int passes = 0;
    long long visited = 0;
    long long accepted = 0;
    if (cfg.toggles.is && !memory.empty()) {
      const double frozen_b = baseline.value();
      auto run_pass = [&] {
        RetentionStats st = retention_pass(policy, memory, cfg, frozen_b, opt);
        ++passes;
        visited += st.visited;
        accepted += st.accepted;
        result.audit.visited += st.visited;
        result.audit.accepted += st.accepted;
        result.audit.applied_out_of_region += st.applied_out_of_region;
      };
      if (cfg.toggles.es) {
        // Anchor to the post-episode parameters, improve on them pass by
        // pass, and give back the anchored best once n_max passes in a row
        // fail to beat it. Every stopping eval in the epoch shares one rng
        // stream: paired comparisons see parameter changes, not fresh
        // sampling noise, which at this validation size would drown them.
        const uint64_t es_seed =
            mix_seed(cfg.seed, kStreamEsEval, static_cast<uint64_t>(epoch));
        ParamStore anchor = policy.params();
        double best = evaluate(agent, val_grids, cfg.max_rounds, cfg.max_qlen,
                               es_seed);
        int stagnant = 0;
        while (stagnant < cfg.n_max && passes < kMaxEsPasses) {
          run_pass();
          const double v = evaluate(agent, val_grids, cfg.max_rounds,
                                    cfg.max_qlen, es_seed);
          if (v > best) {
            best = v;
            anchor = policy.params();
            stagnant = 0;
          } else {
            ++stagnant;
          }
        }
        policy.params().copy_values_from(anchor);
      } else {
        for (int i = 0; i < cfg.fixed_passes; ++i) run_pass();
      }
    }

    const double val =
        evaluate(agent, val_grids, cfg.max_rounds, cfg.max_qlen,
                 mix_seed(cfg.seed, kStreamEpochEval,
                          static_cast<uint64_t>(epoch)));
    if (val > result.best_val) {
      result.best_val = val;
      result.best_params = policy.params();
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.env_samples = env_samples;
    m.train_success = reward_sum / cfg.episodes_per_epoch;
    m.val_success = val;
    m.memory_size = static_cast<int>(memory.size());
    m.retention_passes = passes;
    m.reuse_ratio =
        visited > 0 ? static_cast<double>(accepted) / visited : 0.0;
    if (timing) {
      m.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    }
    result.metrics.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  return result;
}

std::vector<GridImage> grids_of(const std::vector<GameRecord>& records) {
  std::vector<GridImage> grids;
  grids.reserve(records.size());
  for (const GameRecord& r : records) grids.push_back(r.grid);
  return grids;
}

PretrainResult mle_pretrain(QuestionerPolicy& policy,
                            const PretrainConfig& cfg,
                            const std::vector<GameRecord>& train,
                            const std::vector<GameRecord>& val,
                            const PretrainCallback& on_epoch) {
  cfg.validate();
  if (train.empty()) throw ConfigInvalid("empty training split");
  if (val.empty()) throw ConfigInvalid("empty validation split");

  PretrainResult result;
  result.best_params = policy.params();

  Optimizer opt(cfg.optimizer, cfg.lr);
  const std::vector<GridImage> val_grids = grids_of(val);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(cfg.seed, kStreamShuffle,
                             static_cast<uint64_t>(epoch)));
    for (size_t i = order.size() - 1; i > 0; --i) {
      const size_t j = shuffle_rng.uniform(static_cast<uint32_t>(i + 1));
      std::swap(order[i], order[j]);
    }

    double train_nll = 0.0;
    long long train_tokens = 0;
    for (size_t idx : order) {
      auto [nll, count] = policy.mle_loss(train[idx], true);
      train_nll += nll;
      train_tokens += count;
      clip_grad_norm(policy.params(), kGradClipNorm);
      opt.step(policy.params());
    }

    double val_nll = 0.0;
    long long val_tokens = 0;
    for (const GameRecord& r : val) {
      auto [nll, count] = policy.mle_loss(r, false);
      val_nll += nll;
      val_tokens += count;
    }

    PolicyAgent agent(policy);
    PretrainEpoch e;
    e.epoch = epoch;
    e.train_perplexity =
        train_tokens > 0 ? std::exp(train_nll / train_tokens) : 1.0;
    e.val_perplexity = val_tokens > 0 ? std::exp(val_nll / val_tokens) : 1.0;
    e.val_success = evaluate(agent, val_grids, cfg.max_rounds, cfg.max_qlen,
                             mix_seed(cfg.seed, kStreamPretrainEval,
                                      static_cast<uint64_t>(epoch)));
    if (e.val_success > result.best_val_success) {
      result.best_val_success = e.val_success;
      result.best_params = policy.params();
    }
    result.epochs.push_back(e);
    if (on_epoch) on_epoch(e);
  }
  return result;
}

}  // namespace pmrlab
