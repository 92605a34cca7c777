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

#include "pmrlab/game.hpp"

#include <cassert>
#include <utility>

#include "pmrlab/errors.hpp"

namespace pmrlab {

std::vector<Token> render_question(AttributeSlot slot, int value) {
  return {kIs, kIt, slot_token(slot), value_token(slot, value),
          kQuestionMark};
}

std::optional<ParsedQuestion> parse_question(
    const std::vector<Token>& tokens) {
  if (tokens.size() != 5) return std::nullopt;
  if (tokens[0] != kIs || tokens[1] != kIt || tokens[4] != kQuestionMark) {
    return std::nullopt;
  }
  auto slot = slot_from_token(tokens[2]);
  if (!slot) return std::nullopt;
  auto value = value_from_token(*slot, tokens[3]);
  if (!value) return std::nullopt;
  return ParsedQuestion{*slot, *value};
}

Token answer(const GridImage& grid, int target_index,
             const std::vector<Token>& question) {
  assert(target_index >= 0 && target_index < kGridCells);
  auto parsed = parse_question(question);
  if (!parsed) return kInvalid;
  int actual = grid.cells[static_cast<size_t>(target_index)].attribute(parsed->slot);
  return actual == parsed->value ? kYes : kNo;
}

std::vector<int> all_cells() {
  std::vector<int> cells(kGridCells);
  for (int i = 0; i < kGridCells; ++i) cells[static_cast<size_t>(i)] = i;
  return cells;
}

std::vector<int> filter_candidates(const std::vector<int>& candidates,
                                   const GridImage& grid, const QAPair& qa) {
  auto parsed = parse_question(qa.question);
  if (!parsed || (qa.answer != kYes && qa.answer != kNo)) return candidates;
  bool want_match = qa.answer == kYes;
  std::vector<int> kept;
  kept.reserve(candidates.size());
  for (int idx : candidates) {
    assert(idx >= 0 && idx < kGridCells);
    bool match = grid.cells[static_cast<size_t>(idx)].attribute(parsed->slot) == parsed->value;
    if (match == want_match) kept.push_back(idx);
  }
  if (kept.empty()) return candidates;
  return kept;
}

std::optional<std::vector<Token>> scripted_question(
    const std::vector<int>& candidates, const GridImage& grid, Rng& rng) {
  assert(!candidates.empty());
  if (candidates.size() <= 1) return std::nullopt;

  // Informative pairs: the value occurs among the candidates but does not
  // cover all of them, so either answer strictly shrinks the set.
  std::vector<std::pair<AttributeSlot, int>> informative;
  const auto n = static_cast<int>(candidates.size());
  for (AttributeSlot slot : kAllSlots) {
    for (int v = 0; v < slot_domain_size(slot); ++v) {
      int matches = 0;
      for (int idx : candidates) {
        if (grid.cells[static_cast<size_t>(idx)].attribute(slot) == v) ++matches;
      }
      if (matches >= 1 && matches < n) informative.emplace_back(slot, v);
    }
  }
  if (informative.empty()) {
    throw GameTooLong(
        "no informative question exists: remaining candidates share all "
        "attributes");
  }
  auto pick = informative[rng.uniform(static_cast<uint32_t>(informative.size()))];
  return render_question(pick.first, pick.second);
}

int guess(const GridImage& grid, const std::vector<QAPair>& dialog, Rng& rng) {
  std::vector<int> candidates = all_cells();
  for (const QAPair& qa : dialog) {
    candidates = filter_candidates(candidates, grid, qa);
  }
  return candidates[rng.uniform(static_cast<uint32_t>(candidates.size()))];
}

int reward(int guess_index, int target_index) {
  assert(guess_index >= 0 && guess_index < kGridCells);
  assert(target_index >= 0 && target_index < kGridCells);
  return guess_index == target_index ? 1 : 0;
}

GameRecord generate_game(const GridImage& grid, int target_index, Rng& rng,
                         int max_rounds) {
  assert(target_index >= 0 && target_index < kGridCells);
  // Each informative question strictly shrinks the candidate set, so a
  // target with a unique attribute tuple is always isolated within 8
  // rounds. The retry loop only matters for adversarial inputs where the
  // random question order stalls against the round budget.
  constexpr int kMaxAttempts = 32;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<int> candidates = all_cells();
    std::vector<QAPair> dialog;
    for (int round = 0; round < max_rounds && candidates.size() > 1;
         ++round) {
      auto question = scripted_question(candidates, grid, rng);
      assert(question.has_value());
      QAPair qa{std::move(*question), kInvalid};
      qa.answer = answer(grid, target_index, qa.question);
      candidates = filter_candidates(candidates, grid, qa);
      dialog.push_back(std::move(qa));
    }
    if (candidates.size() > 1) continue;
    assert(candidates.front() == target_index);
    GameRecord record;
    record.grid = grid;
    record.target_index = target_index;
    record.dialog = std::move(dialog);
    record.guess_index = guess(grid, record.dialog, rng);
    record.reward = reward(record.guess_index, target_index);
    assert(record.reward == 1);
    return record;
  }
  throw GameTooLong("target not isolated within the round budget");
}

}  // namespace pmrlab
