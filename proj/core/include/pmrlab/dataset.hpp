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

#ifndef PMRLAB_DATASET_HPP_
#define PMRLAB_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pmrlab/game.hpp"

namespace pmrlab {

// Datasets are JSONL: one game record per line, UTF-8, LF line endings,
// keys serialized in alphabetical order so files are byte-reproducible.

struct DatasetSplits {
  std::vector<GameRecord> train;
  std::vector<GameRecord> val;
  std::vector<GameRecord> test;
};

// Generates disjoint splits from a single seeded stream. Grids are deduped
// by their full attribute tuple across all splits. Targets are drawn among
// cells whose attribute tuple is unique within their grid, so scripted
// play can always isolate them; grids with no unique cell are skipped.
DatasetSplits generate_splits(int n_train, int n_val, int n_test,
                              uint64_t seed);

// generate_splits plus serialization to <out_dir>/{train,val,test}.jsonl.
void generate_dataset(int n_train, int n_val, int n_test, uint64_t seed,
                      const std::string& out_dir);

std::string record_to_json_line(const GameRecord& record);
// Throws CorruptRecord on malformed JSON or out-of-domain fields.
GameRecord record_from_json_line(const std::string& line);

void save_records(const std::vector<GameRecord>& records,
                  const std::string& path);
// Throws MissingDataset when the file does not exist, CorruptRecord (with
// a line number) when a line does not parse.
std::vector<GameRecord> load_records(const std::string& path);

}  // namespace pmrlab

#endif  // PMRLAB_DATASET_HPP_
