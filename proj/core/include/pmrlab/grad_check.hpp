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

#ifndef PMRLAB_GRAD_CHECK_HPP_
#define PMRLAB_GRAD_CHECK_HPP_

#include <cstdint>
#include <functional>
#include <string>

#include "pmrlab/param_store.hpp"

namespace pmrlab {

struct GradCheckConfig {
  double epsilon = 1e-5;
  int samples = 200;     // coordinates checked (all of them when fewer exist)
  uint64_t seed = 0;     // coordinate subsampling stream
};

struct GradCheckResult {
  double max_rel_err = 0.0;
  int checked = 0;
  std::string worst_param;
  int worst_flat_index = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central-difference check of the gradients currently stored in params
// against a scalar loss. loss_fn must be a pure function of the parameter
// values (no RNG consumption, no state mutation across calls) and the
// stored gradients must correspond to the same loss at the current point.
// Relative error uses max(|analytic|, |numeric|, 1e-8) as denominator.
GradCheckResult finite_diff_check(ParamStore& params,
                                  const std::function<double()>& loss_fn,
                                  const GradCheckConfig& cfg = {});

}  // namespace pmrlab

#endif  // PMRLAB_GRAD_CHECK_HPP_
