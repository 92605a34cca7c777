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

#ifndef PMRLAB_ERRORS_HPP_
#define PMRLAB_ERRORS_HPP_

#include <stdexcept>

namespace pmrlab {

// Error taxonomy. The CLI maps these onto process exit codes:
// config problems -> 1, I/O problems -> 2, runtime/training failures -> 3.

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingDataset : IoFailure {
  using IoFailure::IoFailure;
};
struct MissingCheckpoint : IoFailure {
  using IoFailure::IoFailure;
};
struct CorruptRecord : IoFailure {
  using IoFailure::IoFailure;
};
struct CorruptCheckpoint : IoFailure {
  using IoFailure::IoFailure;
};

struct ShapeMismatch : std::logic_error {
  using std::logic_error::logic_error;
};
struct LengthMismatch : std::logic_error {
  using std::logic_error::logic_error;
};
struct SupportMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

struct DegenerateDistribution : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GameTooLong : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EnumerationTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pmrlab

#endif  // PMRLAB_ERRORS_HPP_
