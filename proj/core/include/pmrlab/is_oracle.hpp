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

#ifndef PMRLAB_IS_ORACLE_HPP_
#define PMRLAB_IS_ORACLE_HPP_

#include <vector>

#include "pmrlab/rng.hpp"

namespace pmrlab {

// A tiny enumerable MDP used as ground truth for the importance sampling
// machinery: a complete tree of fixed depth with `actions` choices per
// node and a nonnegative reward at each leaf. States are heap-indexed
// (root 0, child(s, a) = s * actions + a + 1), so a trajectory is just a
// root-to-leaf path.
struct MicroMdp {
  int depth = 2;
  int actions = 3;
  // One reward per leaf, indexed by the action path read as a base-A
  // number (first action is the most significant digit).
  std::vector<double> leaf_rewards;

  // Throws ConfigInvalid on inconsistent shapes or negative rewards.
  void validate() const;

  long long leaf_count() const;
  long long internal_count() const;
};

// One action distribution per internal node, indexed like the MDP states.
struct TabularPolicy {
  std::vector<std::vector<double>> rows;

  // Throws ConfigInvalid when rows disagree with the MDP's shape or a row
  // is not a distribution (1e-9 sum tolerance).
  void validate(const MicroMdp& mdp) const;
};

// Uniform policy over the MDP's internal nodes.
TabularPolicy uniform_policy(const MicroMdp& mdp);

// Expected reward by full enumeration of the A^depth trajectories.
// Throws EnumerationTooLarge beyond 100000 trajectories.
double exact_value(const MicroMdp& mdp, const TabularPolicy& pi);

struct IsEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double min_weight = 0.0;
  double max_weight = 0.0;
};

// Importance-sampled estimate of the target policy's value from n
// trajectories drawn under the behavior policy, weighted by
// omega = p(tau) / q(tau). With behavior == target every weight is
// exactly 1. Requires q > 0 wherever p * R > 0 for unbiasedness; the
// tabular construction below guarantees it.
IsEstimate is_value(const MicroMdp& mdp, const TabularPolicy& target,
                    const TabularPolicy& behavior, int n, Rng& rng);

// The reward-weighted proposal q+(tau) proportional to R(tau) * p(tau),
// factored into an exact tabular policy by a backward value recursion.
// Sampling it visits only rewarded paths, which is the idealized form of
// keeping positive episodes in memory; with it the weighted estimator
// omega * R is constant, so its variance collapses. Nodes that cannot
// reach reward get a uniform row (they are never sampled). Throws
// DegenerateDistribution when the expected reward is zero everywhere.
TabularPolicy positive_proposal(const MicroMdp& mdp,
                                const TabularPolicy& target);

}  // namespace pmrlab

#endif  // PMRLAB_IS_ORACLE_HPP_
