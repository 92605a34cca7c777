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

#include "pmrlab/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pmrlab/rng.hpp"

namespace pmrlab {

GradCheckResult finite_diff_check(ParamStore& params,
                                  const std::function<double()>& loss_fn,
                                  const GradCheckConfig& cfg) {
  // Flat coordinate space across entries, in store order.
  std::vector<std::pair<size_t, size_t>> coords;  // (entry index, flat index)
  auto& entries = params.entries();
  size_t total = 0;
  for (const ParamEntry& e : entries) total += e.value.size();

  Rng rng(cfg.seed);
  if (total <= static_cast<size_t>(cfg.samples)) {
    for (size_t k = 0; k < entries.size(); ++k) {
      for (size_t i = 0; i < entries[k].value.size(); ++i) coords.emplace_back(k, i);
    }
  } else {
    // Sample without replacement so a planted fault cannot hide behind
    // duplicate picks.
    std::vector<size_t> flat(static_cast<size_t>(cfg.samples));
    std::vector<size_t> chosen;
    chosen.reserve(flat.size());
    // Floyd's algorithm over [0, total).
    for (size_t j = total - flat.size(); j < total; ++j) {
      size_t t = rng.uniform(static_cast<uint32_t>(j + 1));
      if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) t = j;
      chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    size_t entry_idx = 0;
    size_t entry_base = 0;
    for (size_t flat_idx : chosen) {
      while (flat_idx >= entry_base + entries[entry_idx].value.size()) {
        entry_base += entries[entry_idx].value.size();
        ++entry_idx;
      }
      coords.emplace_back(entry_idx, flat_idx - entry_base);
    }
  }

  GradCheckResult result;
  for (auto [k, i] : coords) {
    double* w = entries[k].value.data() + i;
    const double analytic = entries[k].grad.data()[i];
    const double saved = *w;
    *w = saved + cfg.epsilon;
    const double loss_plus = loss_fn();
    *w = saved - cfg.epsilon;
    const double loss_minus = loss_fn();
    *w = saved;
    const double numeric = (loss_plus - loss_minus) / (2.0 * cfg.epsilon);
    const double denom =
        std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    const double rel = std::abs(analytic - numeric) / denom;
    ++result.checked;
    if (rel > result.max_rel_err) {
      result.max_rel_err = rel;
      result.worst_param = entries[k].name;
      result.worst_flat_index = static_cast<int>(i);
      result.worst_analytic = analytic;
      result.worst_numeric = numeric;
    }
  }
  return result;
}

}  // namespace pmrlab
