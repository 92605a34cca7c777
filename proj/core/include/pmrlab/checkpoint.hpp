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

#ifndef PMRLAB_CHECKPOINT_HPP_
#define PMRLAB_CHECKPOINT_HPP_

#include <string>

#include "pmrlab/param_store.hpp"
#include "pmrlab/questioner.hpp"

namespace pmrlab {

// Text checkpoint format, version 1:
//
//   pmrckpt 1
//   param <name> <rows> <cols>
//   <cols space-separated values> x rows
//   ...
//
// Values are written with shortest round-trip formatting, so
// save -> load -> save is byte-identical and loads restore every bit.

void save_checkpoint(const ParamStore& params, const std::string& path);

// Loads into an existing store; entry names, order and shapes must match
// (ShapeMismatch otherwise). Throws MissingCheckpoint when the file does
// not exist and CorruptCheckpoint on parse errors.
void load_checkpoint(ParamStore& params, const std::string& path);

// Reads only the header shapes and infers the policy dimensions (hidden
// from out_W, embed from embed). Lets callers open a checkpoint without
// knowing its configuration.
PolicyConfig checkpoint_policy_config(const std::string& path);

}  // namespace pmrlab

#endif  // PMRLAB_CHECKPOINT_HPP_
