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

#ifndef PMRLAB_QUESTIONER_HPP_
#define PMRLAB_QUESTIONER_HPP_

#include <array>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmrlab/game.hpp"
#include "pmrlab/nn_ops.hpp"
#include "pmrlab/param_store.hpp"

namespace pmrlab {

struct PolicyConfig {
  int hidden = 64;
  int embed = 16;
};

// One played episode from the questioner's point of view. tokens[0] is
// always <sos>; action_mask marks the positions the policy emitted (its
// question tokens, including the forced terminator) as opposed to injected
// oracle answers. probs holds the generation probability of each emitted
// token and 0.0 elsewhere.
struct Trajectory {
  GridImage grid;
  int target_index = 0;
  std::vector<Token> tokens;
  std::vector<uint8_t> action_mask;
  std::vector<double> probs;
  int guess_index = 0;
  int reward = 0;
};

// Token stream with its action mask, the teacher-forcing view of a dialog.
struct TokenStream {
  std::vector<Token> tokens;
  std::vector<uint8_t> mask;
};

// <sos>, then per round the question tokens (masked) and the answer
// (unmasked). This is exactly the stream rollout() produces when the
// policy emits those questions.
TokenStream stream_from_dialog(const std::vector<QAPair>& dialog);

// Recurrent questioner: token embedding, linear context encoder that
// initializes the LSTM state from the grid, single LSTM layer and a
// softmax head over the vocabulary.
//
// Parameter names and insertion order are a stable contract shared with
// the checkpoint format: embed (V x E), ctx_W (198 x 2H, one row per
// context indicator), ctx_b (2H x 1), lstm_W (4H x (E+H)), lstm_b
// (4H x 1), out_W (V x H), out_b (V x 1).
class QuestionerPolicy {
 public:
  struct State {
    std::vector<double> h, c;
  };

  // Per-position caches of one teacher-forced forward pass, kept for
  // backpropagation through time. steps[t-1] is the LSTM step that
  // consumed tokens[t-1]; dists[t] is the full softmax at masked t.
  struct ForwardCache {
    State state0;
    std::array<int, 4 * kGridCells> ctx_indices{};
    std::vector<LstmStepCache> steps;
    std::vector<std::vector<double>> dists;
  };

  struct ScoreResult {
    std::vector<double> probs;  // aligned with tokens, 0 where unmasked
    ForwardCache cache;
  };

  // Initializes every parameter uniformly in [-0.08, 0.08] from the seed.
  QuestionerPolicy(const PolicyConfig& cfg, uint64_t init_seed);

  const PolicyConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // (h0, c0) from the grid context, a linear map of the multi-hot input.
  State initial_state(const GridImage& grid) const;

  // Consumes one token, advancing the recurrent state in place.
  void advance(State& state, Token token, LstmStepCache& scratch) const;

  // Next-token distribution from the current state; out has kVocabSize.
  void token_distribution(const State& state, double* out) const;

  // Teacher-forced pass over a played stream: returns, per position, the
  // probability the policy assigns to the token that is there. Recomputes
  // exactly what rollout() computed, so on the generating policy the
  // result equals the trajectory's stored probs bit for bit.
  // Throws LengthMismatch on malformed streams.
  ScoreResult score(const GridImage& grid, const std::vector<Token>& tokens,
                    const std::vector<uint8_t>& mask) const;

  // Accumulates d/dtheta of sum_t coeffs[t] * (-log p_theta(tokens[t]))
  // over masked positions into the parameter gradients. coeffs is aligned
  // with tokens; unmasked entries are ignored.
  void accumulate_gradients(const ForwardCache& cache,
                            const std::vector<Token>& tokens,
                            const std::vector<uint8_t>& mask,
                            const std::vector<double>& coeffs);

  // Negative log-likelihood of the record's questions under the policy;
  // optionally accumulates its gradients (coefficient 1 at every masked
  // position). Returns the summed NLL and the number of masked tokens.
  std::pair<double, int> mle_loss(const GameRecord& record,
                                  bool accumulate_grads);

 private:
  PolicyConfig cfg_;
  ParamStore params_;
};

// Anything able to play the questioner side token by token. rollout()
// drives it; the oracle and guesser live in the environment.
class RolloutAgent {
 public:
  virtual ~RolloutAgent() = default;
  virtual void begin(const GridImage& grid) = 0;
  // Emits the next question token. When must_terminate is set the agent
  // has exhausted the question budget and must emit '?' (reporting the
  // probability it assigns to it).
  virtual std::pair<Token, double> next_question_token(bool must_terminate,
                                                       Rng& rng) = 0;
  virtual void observe_answer(Token answer) = 0;
};

// Samples from a QuestionerPolicy.
class PolicyAgent : public RolloutAgent {
 public:
  explicit PolicyAgent(const QuestionerPolicy& policy) : policy_(&policy) {}

  void begin(const GridImage& grid) override;
  std::pair<Token, double> next_question_token(bool must_terminate,
                                               Rng& rng) override;
  void observe_answer(Token answer) override;

 private:
  const QuestionerPolicy* policy_;
  QuestionerPolicy::State state_;
  LstmStepCache scratch_;
  std::array<double, kVocabSize> dist_{};
};

// Replays the stored questions of known games, keyed by grid. Rounds past
// the stored dialog repeat its last question, which leaves the candidate
// set unchanged. Emitted tokens report probability 1.
class ReplayAgent : public RolloutAgent {
 public:
  explicit ReplayAgent(const std::vector<GameRecord>& records);

  // Throws SupportMismatch when the grid has no stored game.
  void begin(const GridImage& grid) override;
  std::pair<Token, double> next_question_token(bool must_terminate,
                                               Rng& rng) override;
  void observe_answer(Token answer) override;

 private:
  const std::vector<GameRecord>* records_;
  std::unordered_map<uint64_t, size_t> by_grid_;
  const GameRecord* current_ = nullptr;
  size_t round_ = 0;
  size_t pos_ = 0;
};

// Hash of a grid key for replay lookup (collision-checked at build time).
uint64_t grid_hash(const GridImage& grid);

// Plays one episode: max_rounds question/answer rounds, each question
// capped at max_qlen tokens with a forced terminator, then the guess.
// Consumes rng for sampling and for the final guess.
Trajectory rollout(RolloutAgent& agent, const GridImage& grid,
                   int target_index, int max_rounds, int max_qlen, Rng& rng);

}  // namespace pmrlab

#endif  // PMRLAB_QUESTIONER_HPP_
