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

#include "pmrlab/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "pmrlab/errors.hpp"

namespace pmrlab {

namespace {

using nlohmann::json;

json cell_to_json(const Cell& cell) {
  json j;
  j["digit"] = cell.digit;
  j["color"] = slot_value_name(AttributeSlot::kColor, cell.color);
  j["bgcolor"] = slot_value_name(AttributeSlot::kBgcolor, cell.bgcolor);
  j["style"] = slot_value_name(AttributeSlot::kStyle, cell.style);
  return j;
}

Cell cell_from_json(const json& j) {
  Cell cell;
  cell.digit = j.at("digit").get<int>();
  if (cell.digit < 0 || cell.digit >= kNumDigits) {
    throw CorruptRecord("cell digit out of range");
  }
  auto named = [&](AttributeSlot slot, const char* field) {
    auto v = slot_value_from_name(slot, j.at(field).get<std::string>());
    if (!v) throw CorruptRecord(std::string("unknown ") + field + " name");
    return *v;
  };
  cell.color = named(AttributeSlot::kColor, "color");
  cell.bgcolor = named(AttributeSlot::kBgcolor, "bgcolor");
  cell.style = named(AttributeSlot::kStyle, "style");
  return cell;
}

int checked_cell_index(const json& j, const char* field) {
  int v = j.at(field).get<int>();
  if (v < 0 || v >= kGridCells) {
    throw CorruptRecord(std::string(field) + " out of range");
  }
  return v;
}

}  // namespace

std::string record_to_json_line(const GameRecord& record) {
  json j;
  json grid = json::array();
  for (const Cell& cell : record.grid.cells) grid.push_back(cell_to_json(cell));
  j["grid"] = std::move(grid);
  j["target_index"] = record.target_index;
  json dialog = json::array();
  for (const QAPair& qa : record.dialog) {
    json pair;
    pair["q"] = qa.question;
    pair["a"] = qa.answer;
    dialog.push_back(std::move(pair));
  }
  j["dialog"] = std::move(dialog);
  j["guess_index"] = record.guess_index;
  j["reward"] = record.reward;
  return j.dump();
}

GameRecord record_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw CorruptRecord(std::string("invalid JSON: ") + e.what());
  }
  try {
    GameRecord record;
    const json& grid = j.at("grid");
    if (!grid.is_array() || grid.size() != kGridCells) {
      throw CorruptRecord("grid must hold exactly 9 cells");
    }
    for (int i = 0; i < kGridCells; ++i) {
      record.grid.cells[static_cast<size_t>(i)] = cell_from_json(grid[static_cast<size_t>(i)]);
    }
    record.target_index = checked_cell_index(j, "target_index");
    record.guess_index = checked_cell_index(j, "guess_index");
    record.reward = j.at("reward").get<int>();
    if (record.reward != 0 && record.reward != 1) {
      throw CorruptRecord("reward must be 0 or 1");
    }
    for (const json& pair : j.at("dialog")) {
      QAPair qa;
      for (const json& t : pair.at("q")) {
        Token token = t.get<Token>();
        if (!token_in_vocab(token)) throw CorruptRecord("question token out of vocabulary");
        qa.question.push_back(token);
      }
      qa.answer = pair.at("a").get<Token>();
      if (qa.answer != kYes && qa.answer != kNo && qa.answer != kInvalid) {
        throw CorruptRecord("answer must be <yes>, <no> or <invalid>");
      }
      record.dialog.push_back(std::move(qa));
    }
    return record;
  } catch (const json::exception& e) {
    throw CorruptRecord(std::string("bad record shape: ") + e.what());
  }
}

void save_records(const std::vector<GameRecord>& records,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  for (const GameRecord& record : records) {
    out << record_to_json_line(record) << '\n';
  }
  if (!out) throw IoFailure("write failed: " + path);
}

std::vector<GameRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingDataset("dataset not found: " + path);
  std::vector<GameRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      records.push_back(record_from_json_line(line));
    } catch (const CorruptRecord& e) {
      throw CorruptRecord(path + ":" + std::to_string(line_no) + ": " +
                          e.what());
    }
  }
  return records;
}

DatasetSplits generate_splits(int n_train, int n_val, int n_test,
                              uint64_t seed) {
  Rng rng(seed);
  std::set<std::array<uint16_t, kGridCells>> seen;
  DatasetSplits splits;
  auto fill = [&](std::vector<GameRecord>& out, int n) {
    out.reserve(static_cast<size_t>(n));
    while (static_cast<int>(out.size()) < n) {
      GridImage grid = generate_grid(rng);
      if (!seen.insert(grid.key()).second) continue;
      // Candidate targets are the cells no other cell duplicates; a grid
      // where every tuple repeats cannot host a solvable game.
      auto key = grid.key();
      std::vector<int> unique_cells;
      for (int i = 0; i < kGridCells; ++i) {
        int copies = 0;
        for (int k = 0; k < kGridCells; ++k) {
          if (key[static_cast<size_t>(k)] == key[static_cast<size_t>(i)]) ++copies;
        }
        if (copies == 1) unique_cells.push_back(i);
      }
      if (unique_cells.empty()) continue;
      int target = unique_cells[rng.uniform(static_cast<uint32_t>(unique_cells.size()))];
      out.push_back(generate_game(grid, target, rng));
    }
  };
  fill(splits.train, n_train);
  fill(splits.val, n_val);
  fill(splits.test, n_test);
  return splits;
}

void generate_dataset(int n_train, int n_val, int n_test, uint64_t seed,
                      const std::string& out_dir) {
  DatasetSplits splits = generate_splits(n_train, n_val, n_test, seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create directory: " + out_dir);
  save_records(splits.train, out_dir + "/train.jsonl");
  save_records(splits.val, out_dir + "/val.jsonl");
  save_records(splits.test, out_dir + "/test.jsonl");
}

}  // namespace pmrlab
