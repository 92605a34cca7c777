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

#ifndef PMRLAB_GAME_HPP_
#define PMRLAB_GAME_HPP_

#include <optional>
#include <vector>

#include "pmrlab/grid.hpp"

namespace pmrlab {

// Attribute guessing game on a 3x3 grid. An oracle knows the target cell;
// the questioner asks yes/no questions about attribute values and finally
// a guesser picks a cell consistent with the answers.

// Default round budgets. Scripted play always isolates a unique target
// within 8 rounds (each informative question strictly shrinks a 9-cell
// candidate set); learned play uses the tighter budget.
inline constexpr int kScriptedMaxRounds = 8;
inline constexpr int kPlayMaxRounds = 4;
inline constexpr int kMaxQuestionLen = 6;

// One question (token stream ending in '?') and the oracle's answer.
struct QAPair {
  std::vector<Token> question;
  Token answer = kInvalid;

  bool operator==(const QAPair&) const = default;
};

// A complete played game, the unit stored in datasets.
struct GameRecord {
  GridImage grid;
  int target_index = 0;
  std::vector<QAPair> dialog;
  int guess_index = 0;
  int reward = 0;

  bool operator==(const GameRecord&) const = default;
};

struct ParsedQuestion {
  AttributeSlot slot;
  int value = 0;
};

// Renders the fixed template [is, it, <slot>, <value>, ?].
std::vector<Token> render_question(AttributeSlot slot, int value);

// Strict template match. Anything else (wrong length, wrong frame words,
// value from a different slot) is malformed: malformed is a value here,
// not an error, because learned policies emit arbitrary token strings.
std::optional<ParsedQuestion> parse_question(const std::vector<Token>& tokens);

// Oracle answer: <yes>/<no> for a well-formed question, <invalid> for a
// malformed one. Never lies, never refuses a well-formed question.
Token answer(const GridImage& grid, int target_index,
             const std::vector<Token>& question);

// The full candidate set {0..8}.
std::vector<int> all_cells();

// Keeps the candidates consistent with one answered question. Malformed or
// <invalid>-answered pairs leave the set unchanged, as does a pair that
// would empty it (the guesser never discards its last candidates on
// contradictory evidence). Idempotent for a repeated identical pair.
std::vector<int> filter_candidates(const std::vector<int>& candidates,
                                   const GridImage& grid, const QAPair& qa);

// Scripted questioner: picks uniformly among informative (slot, value)
// pairs, those matching at least one candidate but not all of them.
// Returns nullopt when a single candidate remains (nothing left to ask).
// Throws GameTooLong if several candidates remain but no question can
// separate them (identical attribute tuples).
std::optional<std::vector<Token>> scripted_question(
    const std::vector<int>& candidates, const GridImage& grid, Rng& rng);

// Uniform pick among the cells consistent with the dialog.
int guess(const GridImage& grid, const std::vector<QAPair>& dialog, Rng& rng);

// 1 when the guess hits the target, else 0.
int reward(int guess_index, int target_index);

// Plays one scripted game to completion: informative questions until the
// candidate set is a singleton, then the guess (which is then exact, so
// the record always carries reward 1). Throws GameTooLong when the target
// cannot be isolated within max_rounds.
GameRecord generate_game(const GridImage& grid, int target_index, Rng& rng,
                         int max_rounds = kScriptedMaxRounds);

}  // namespace pmrlab

#endif  // PMRLAB_GAME_HPP_
