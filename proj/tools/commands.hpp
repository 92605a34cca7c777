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

#ifndef PMRLAB_TOOLS_COMMANDS_HPP_
#define PMRLAB_TOOLS_COMMANDS_HPP_

#include <string>

#include "run_config.hpp"

namespace pmrlab {

// Command bodies. Errors surface as the library's exceptions; the CLI
// entry point maps them onto exit codes (config 1, I/O 2, training 3).

int cmd_generate(const RunConfig& cfg);
int cmd_pretrain(const RunConfig& cfg);

// mode "reinforce" forces the pure on-policy toggle set; mode "pmr" runs
// the toggles from the config (all on by default).
int cmd_train(const RunConfig& cfg, const std::string& mode,
              const std::string& ckpt_path);

int cmd_ablate(const RunConfig& cfg, const std::string& ckpt_path);

int cmd_eval(const RunConfig& cfg, const std::string& ckpt_path,
             const std::string& split);

}  // namespace pmrlab

#endif  // PMRLAB_TOOLS_COMMANDS_HPP_
