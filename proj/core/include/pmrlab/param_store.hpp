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

#ifndef PMRLAB_PARAM_STORE_HPP_
#define PMRLAB_PARAM_STORE_HPP_

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>

#include "pmrlab/matrix.hpp"

namespace pmrlab {

// One named parameter with its gradient accumulator.
struct ParamEntry {
  std::string name;
  Matrix value;
  Matrix grad;
};

// Ordered collection of named parameters. Iteration follows insertion
// order, which fixes the checkpoint layout and the optimizer update order;
// entries are stored in a deque so references stay valid across add().
class ParamStore {
 public:
  Matrix& add(const std::string& name, int rows, int cols);

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  // Throws ShapeMismatch on unknown names.
  ParamEntry& entry(const std::string& name);
  const ParamEntry& entry(const std::string& name) const;
  Matrix& value(const std::string& name) { return entry(name).value; }
  const Matrix& value(const std::string& name) const {
    return entry(name).value;
  }
  Matrix& grad(const std::string& name) { return entry(name).grad; }

  std::deque<ParamEntry>& entries() { return entries_; }
  const std::deque<ParamEntry>& entries() const { return entries_; }

  void zero_grads();
  size_t param_count() const;

  // Copies values (not grads) from another store with identical layout.
  // Throws ShapeMismatch when names or shapes disagree.
  void copy_values_from(const ParamStore& other);

 private:
  std::deque<ParamEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

// L2 norm over every gradient entry in the store.
double global_grad_norm(const ParamStore& params);

// Scales all gradients so their global norm is at most max_norm.
// Returns the factor applied (1.0 when already within the bound).
double clip_grad_norm(ParamStore& params, double max_norm);

enum class OptimizerKind { kSgd, kAdam };

// SGD or Adam step over a ParamStore. Adam moments are keyed by entry
// order and lazily shaped on first use; beta/epsilon are the usual
// defaults (0.9, 0.999, 1e-8).
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr) : kind_(kind), lr_(lr) {}

  OptimizerKind kind() const { return kind_; }
  double lr() const { return lr_; }

  // Applies accumulated gradients as a descent step and zeroes them.
  void step(ParamStore& params);

 private:
  OptimizerKind kind_;
  double lr_;
  int64_t t_ = 0;
  std::deque<Matrix> m_;
  std::deque<Matrix> v_;
};

}  // namespace pmrlab

#endif  // PMRLAB_PARAM_STORE_HPP_
