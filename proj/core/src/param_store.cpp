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

#include "pmrlab/param_store.hpp"

#include <cmath>

#include "pmrlab/errors.hpp"

namespace pmrlab {

Matrix& ParamStore::add(const std::string& name, int rows, int cols) {
  if (index_.count(name) > 0) {
    throw ShapeMismatch("duplicate parameter: " + name);
  }
  index_[name] = entries_.size();
  entries_.push_back(ParamEntry{name, Matrix(rows, cols), Matrix(rows, cols)});
  return entries_.back().value;
}

ParamEntry& ParamStore::entry(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeMismatch("unknown parameter: " + name);
  return entries_[it->second];
}

const ParamEntry& ParamStore::entry(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeMismatch("unknown parameter: " + name);
  return entries_[it->second];
}

void ParamStore::zero_grads() {
  for (ParamEntry& e : entries_) e.grad.zero();
}

size_t ParamStore::param_count() const {
  size_t n = 0;
  for (const ParamEntry& e : entries_) n += e.value.size();
  return n;
}

void ParamStore::copy_values_from(const ParamStore& other) {
  if (other.entries_.size() != entries_.size()) {
    throw ShapeMismatch("parameter stores differ in entry count");
  }
  for (size_t i = 0; i < entries_.size(); ++i) {
    const ParamEntry& src = other.entries_[i];
    ParamEntry& dst = entries_[i];
    if (src.name != dst.name || src.value.rows() != dst.value.rows() ||
        src.value.cols() != dst.value.cols()) {
      throw ShapeMismatch("parameter stores disagree at entry " + dst.name);
    }
    dst.value = src.value;
  }
}

double global_grad_norm(const ParamStore& params) {
  double sum_sq = 0.0;
  for (const ParamEntry& e : params.entries()) {
    const double* g = e.grad.data();
    for (size_t i = 0; i < e.grad.size(); ++i) sum_sq += g[i] * g[i];
  }
  return std::sqrt(sum_sq);
}

double clip_grad_norm(ParamStore& params, double max_norm) {
  double norm = global_grad_norm(params);
  if (!(norm > max_norm)) return 1.0;
  double scale = max_norm / norm;
  for (ParamEntry& e : params.entries()) {
    double* g = e.grad.data();
    for (size_t i = 0; i < e.grad.size(); ++i) g[i] *= scale;
  }
  return scale;
}

void Optimizer::step(ParamStore& params) {
  if (kind_ == OptimizerKind::kSgd) {
    for (ParamEntry& e : params.entries()) {
      double* w = e.value.data();
      const double* g = e.grad.data();
      for (size_t i = 0; i < e.value.size(); ++i) w[i] -= lr_ * g[i];
    }
    params.zero_grads();
    return;
  }

  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  auto& entries = params.entries();
  if (m_.empty()) {
    for (ParamEntry& e : entries) {
      m_.emplace_back(e.value.rows(), e.value.cols());
      v_.emplace_back(e.value.rows(), e.value.cols());
    }
  }
  if (m_.size() != entries.size()) {
    throw ShapeMismatch("optimizer state does not match parameter store");
  }
  ++t_;
  double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (size_t k = 0; k < entries.size(); ++k) {
    double* w = entries[k].value.data();
    const double* g = entries[k].grad.data();
    double* m = m_[k].data();
    double* v = v_[k].data();
    for (size_t i = 0; i < entries[k].value.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      double m_hat = m[i] / bc1;
      double v_hat = v[i] / bc2;
      w[i] -= lr_ * m_hat / (std::sqrt(v_hat) + kEps);
    }
  }
  params.zero_grads();
}

}  // namespace pmrlab
