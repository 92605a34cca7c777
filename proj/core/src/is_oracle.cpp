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

#include "pmrlab/is_oracle.hpp"

#include <cmath>
#include <vector>

#include "pmrlab/errors.hpp"
#include "pmrlab/nn_ops.hpp"

namespace pmrlab {

namespace {

constexpr long long kMaxEnumeration = 100000;

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

long long MicroMdp::leaf_count() const { return ipow(actions, depth); }

long long MicroMdp::internal_count() const {
  return (ipow(actions, depth) - 1) / (actions - 1);
}

void MicroMdp::validate() const {
  if (depth < 1) throw ConfigInvalid("micro mdp: depth must be >= 1");
  if (actions < 2) throw ConfigInvalid("micro mdp: actions must be >= 2");
  if (static_cast<long long>(leaf_rewards.size()) != leaf_count()) {
    throw ConfigInvalid("micro mdp: leaf_rewards size must be actions^depth");
  }
  for (double r : leaf_rewards) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ConfigInvalid("micro mdp: rewards must be finite and >= 0");
    }
  }
}

void TabularPolicy::validate(const MicroMdp& mdp) const {
  if (static_cast<long long>(rows.size()) != mdp.internal_count()) {
    throw ConfigInvalid("tabular policy: one row per internal node required");
  }
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != mdp.actions) {
      throw ConfigInvalid("tabular policy: row width must match actions");
    }
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw ConfigInvalid("tabular policy: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigInvalid("tabular policy: row does not sum to 1");
    }
  }
}

TabularPolicy uniform_policy(const MicroMdp& mdp) {
  TabularPolicy pi;
  pi.rows.assign(static_cast<size_t>(mdp.internal_count()),
                 std::vector<double>(mdp.actions, 1.0 / mdp.actions));
  return pi;
}

double exact_value(const MicroMdp& mdp, const TabularPolicy& pi) {
  mdp.validate();
  const long long leaves = mdp.leaf_count();
  if (leaves > kMaxEnumeration) {
    throw EnumerationTooLarge("micro mdp: too many trajectories to enumerate");
  }
  pi.validate(mdp);
  double value = 0.0;
  for (long long path = 0; path < leaves; ++path) {
    double prob = 1.0;
    long long state = 0;
    long long rest = path;
    long long place = leaves / mdp.actions;
    for (int t = 0; t < mdp.depth; ++t) {
      const int a = static_cast<int>(rest / place);
      rest %= place;
      place /= mdp.actions;
      prob *= pi.rows[static_cast<size_t>(state)][a];
      state = state * mdp.actions + a + 1;
    }
    value += prob * mdp.leaf_rewards[static_cast<size_t>(path)];
  }
  return value;
}

IsEstimate is_value(const MicroMdp& mdp, const TabularPolicy& target,
                    const TabularPolicy& behavior, int n, Rng& rng) {
  mdp.validate();
  target.validate(mdp);
  behavior.validate(mdp);
  if (n < 2) throw ConfigInvalid("is_value: need at least 2 samples");

  IsEstimate est;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    long long state = 0;
    long long path = 0;
    double weight = 1.0;
    for (int t = 0; t < mdp.depth; ++t) {
      const auto& q_row = behavior.rows[static_cast<size_t>(state)];
      const int a =
          sample_categorical(q_row.data(), mdp.actions, rng);
      weight *= target.rows[static_cast<size_t>(state)][a] / q_row[a];
      path = path * mdp.actions + a;
      state = state * mdp.actions + a + 1;
    }
    const double x = weight * mdp.leaf_rewards[static_cast<size_t>(path)];
    sum += x;
    sum_sq += x * x;
    if (i == 0) {
      est.min_weight = est.max_weight = weight;
    } else {
      est.min_weight = std::min(est.min_weight, weight);
      est.max_weight = std::max(est.max_weight, weight);
    }
  }
  est.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) /
                                       (static_cast<double>(n) - 1.0));
  est.std_error = std::sqrt(var / n);
  return est;
}

TabularPolicy positive_proposal(const MicroMdp& mdp,
                                const TabularPolicy& target) {
  mdp.validate();
  const long long leaves = mdp.leaf_count();
  if (leaves > kMaxEnumeration) {
    throw EnumerationTooLarge("micro mdp: too many trajectories to enumerate");
  }
  target.validate(mdp);
  const long long internals = mdp.internal_count();
  const long long total = internals + leaves;

  // Reward-weighted value of every node: leaves carry their reward, an
  // internal node the target-policy average of its children.
  std::vector<double> w(static_cast<size_t>(total), 0.0);
  for (long long leaf = 0; leaf < leaves; ++leaf) {
    w[static_cast<size_t>(internals + leaf)] =
        mdp.leaf_rewards[static_cast<size_t>(leaf)];
  }
  for (long long s = internals - 1; s >= 0; --s) {
    double v = 0.0;
    for (int a = 0; a < mdp.actions; ++a) {
      v += target.rows[static_cast<size_t>(s)][a] *
           w[static_cast<size_t>(s * mdp.actions + a + 1)];
    }
    w[static_cast<size_t>(s)] = v;
  }
  if (w[0] <= 0.0) {
    throw DegenerateDistribution("positive proposal: expected reward is zero");
  }

  TabularPolicy q = uniform_policy(mdp);
  for (long long s = 0; s < internals; ++s) {
    if (w[static_cast<size_t>(s)] <= 0.0) continue;  // unreachable under q+
    auto& row = q.rows[static_cast<size_t>(s)];
    for (int a = 0; a < mdp.actions; ++a) {
      row[a] = target.rows[static_cast<size_t>(s)][a] *
               w[static_cast<size_t>(s * mdp.actions + a + 1)] /
               w[static_cast<size_t>(s)];
    }
  }
  return q;
}

}  // namespace pmrlab
