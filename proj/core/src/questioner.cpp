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

#include "pmrlab/questioner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "pmrlab/errors.hpp"

namespace pmrlab {

TokenStream stream_from_dialog(const std::vector<QAPair>& dialog) {
  TokenStream s;
  s.tokens.push_back(kSos);
  s.mask.push_back(0);
  for (const QAPair& qa : dialog) {
    for (Token t : qa.question) {
      s.tokens.push_back(t);
      s.mask.push_back(1);
    }
    s.tokens.push_back(qa.answer);
    s.mask.push_back(0);
  }
  return s;
}

QuestionerPolicy::QuestionerPolicy(const PolicyConfig& cfg, uint64_t init_seed)
    : cfg_(cfg) {
  if (cfg.hidden <= 0 || cfg.embed <= 0) {
    throw ConfigInvalid("policy dimensions must be positive");
  }
  const int h = cfg.hidden;
  const int e = cfg.embed;
  params_.add("embed", kVocabSize, e);
  params_.add("ctx_W", kContextDim, 2 * h);
  params_.add("ctx_b", 2 * h, 1);
  params_.add("lstm_W", 4 * h, e + h);
  params_.add("lstm_b", 4 * h, 1);
  params_.add("out_W", kVocabSize, h);
  params_.add("out_b", kVocabSize, 1);

  Rng rng(init_seed);
  for (ParamEntry& entry : params_.entries()) {
    double* w = entry.value.data();
    for (size_t i = 0; i < entry.value.size(); ++i) {
      w[i] = rng.uniform_range(-0.08, 0.08);
    }
  }
}

QuestionerPolicy::State QuestionerPolicy::initial_state(
    const GridImage& grid) const {
  const int h = cfg_.hidden;
  const Matrix& ctx_w = params_.value("ctx_W");
  const Matrix& ctx_b = params_.value("ctx_b");
  std::vector<double> acc(static_cast<size_t>(2 * h));
  const double* bias = ctx_b.data();
  for (int u = 0; u < 2 * h; ++u) acc[static_cast<size_t>(u)] = bias[u];
  for (int idx : context_active_indices(grid)) {
    const double* row = ctx_w.row(idx);
    for (int u = 0; u < 2 * h; ++u) acc[static_cast<size_t>(u)] += row[u];
  }
  State s;
  s.h.assign(acc.begin(), acc.begin() + h);
  s.c.assign(acc.begin() + h, acc.end());
  return s;
}

void QuestionerPolicy::advance(State& state, Token token,
                               LstmStepCache& scratch) const {
  if (!token_in_vocab(token)) {
    throw SupportMismatch("token outside vocabulary");
  }
  const Matrix& embed = params_.value("embed");
  const double* x = embed.row(token);
  lstm_step_forward(params_.value("lstm_W"), params_.value("lstm_b"), x,
                    cfg_.embed, state.h.data(), state.c.data(), scratch);
  state.h = scratch.h;
  state.c = scratch.c;
}

void QuestionerPolicy::token_distribution(const State& state,
                                          double* out) const {
  double logits[kVocabSize];
  linear_forward(params_.value("out_W"), params_.value("out_b"),
                 state.h.data(), logits);
  softmax(logits, kVocabSize, out);
}

QuestionerPolicy::ScoreResult QuestionerPolicy::score(
    const GridImage& grid, const std::vector<Token>& tokens,
    const std::vector<uint8_t>& mask) const {
  const size_t n = tokens.size();
  if (n == 0 || mask.size() != n) {
    throw LengthMismatch("token stream and mask must align and be nonempty");
  }
  if (tokens[0] != kSos || mask[0] != 0) {
    throw LengthMismatch("streams must open with an unmasked <sos>");
  }

  ScoreResult res;
  res.probs.assign(n, 0.0);
  res.cache.ctx_indices = context_active_indices(grid);
  res.cache.state0 = initial_state(grid);
  res.cache.steps.reserve(n - 1);
  res.cache.dists.resize(n);

  State state = res.cache.state0;
  for (size_t t = 1; t < n; ++t) {
    res.cache.steps.emplace_back();
    advance(state, tokens[t - 1], res.cache.steps.back());
    if (mask[t]) {
      if (!token_in_vocab(tokens[t])) {
        throw SupportMismatch("token outside vocabulary");
      }
      auto& dist = res.cache.dists[t];
      dist.resize(kVocabSize);
      token_distribution(state, dist.data());
      res.probs[t] = dist[static_cast<size_t>(tokens[t])];
    }
  }
  return res;
}

void QuestionerPolicy::accumulate_gradients(const ForwardCache& cache,
                                            const std::vector<Token>& tokens,
                                            const std::vector<uint8_t>& mask,
                                            const std::vector<double>& coeffs) {
  const size_t n = tokens.size();
  if (mask.size() != n || coeffs.size() != n) {
    throw LengthMismatch("mask/coeffs must align with tokens");
  }
  if (cache.steps.size() != n - 1) {
    throw LengthMismatch("forward cache does not match the stream");
  }
  const int h = cfg_.hidden;
  const int e = cfg_.embed;
  const Matrix& out_w = params_.value("out_W");
  const Matrix& lstm_w = params_.value("lstm_W");
  const Matrix& embed = params_.value("embed");
  Matrix& d_embed = params_.grad("embed");
  Matrix& d_ctx_w = params_.grad("ctx_W");
  Matrix& d_ctx_b = params_.grad("ctx_b");
  Matrix& d_lstm_w = params_.grad("lstm_W");
  Matrix& d_lstm_b = params_.grad("lstm_b");
  Matrix& d_out_w = params_.grad("out_W");
  Matrix& d_out_b = params_.grad("out_b");

  std::vector<double> dh(static_cast<size_t>(h), 0.0);
  std::vector<double> dc(static_cast<size_t>(h), 0.0);
  std::vector<double> dh_prev(static_cast<size_t>(h));
  std::vector<double> dc_prev(static_cast<size_t>(h));
  std::vector<double> dx(static_cast<size_t>(e));
  double dlogits[kVocabSize];

  for (size_t t = n - 1; t >= 1; --t) {
    const LstmStepCache& step = cache.steps[t - 1];
    if (mask[t] && coeffs[t] != 0.0) {
      const auto& dist = cache.dists[t];
      assert(!dist.empty());
      for (int k = 0; k < kVocabSize; ++k) {
        const double onehot = (k == tokens[t]) ? 1.0 : 0.0;
        dlogits[k] = coeffs[t] * (dist[static_cast<size_t>(k)] - onehot);
      }
      // dh accumulates on top of the gradient flowing from later steps.
      linear_backward(out_w, step.h.data(), dlogits, d_out_w, d_out_b,
                      dh.data());
    }
    const double* x = embed.row(tokens[t - 1]);
    lstm_step_backward(lstm_w, x, e, step, dh.data(), dc.data(), d_lstm_w,
                       d_lstm_b, dx.data(), dh_prev.data(), dc_prev.data());
    double* de = d_embed.row(tokens[t - 1]);
    for (int j = 0; j < e; ++j) de[j] += dx[static_cast<size_t>(j)];
    std::swap(dh, dh_prev);
    std::swap(dc, dc_prev);
  }

  // dh/dc now carry d(h0)/d(c0); push them through the context encoder.
  double* db = d_ctx_b.data();
  for (int u = 0; u < h; ++u) {
    db[u] += dh[static_cast<size_t>(u)];
    db[h + u] += dc[static_cast<size_t>(u)];
  }
  for (int idx : cache.ctx_indices) {
    double* row = d_ctx_w.row(idx);
    for (int u = 0; u < h; ++u) {
      row[u] += dh[static_cast<size_t>(u)];
      row[h + u] += dc[static_cast<size_t>(u)];
    }
  }
}

std::pair<double, int> QuestionerPolicy::mle_loss(const GameRecord& record,
                                                  bool accumulate_grads) {
  TokenStream stream = stream_from_dialog(record.dialog);
  ScoreResult res = score(record.grid, stream.tokens, stream.mask);
  double nll = 0.0;
  int count = 0;
  for (size_t t = 0; t < stream.tokens.size(); ++t) {
    if (!stream.mask[t]) continue;
    nll -= std::log(res.probs[t]);
    ++count;
  }
  if (accumulate_grads) {
    std::vector<double> coeffs(stream.tokens.size(), 1.0);
    accumulate_gradients(res.cache, stream.tokens, stream.mask, coeffs);
  }
  return {nll, count};
}

void PolicyAgent::begin(const GridImage& grid) {
  state_ = policy_->initial_state(grid);
  // Match score(): the first emission is conditioned on <sos>.
  policy_->advance(state_, kSos, scratch_);
}

std::pair<Token, double> PolicyAgent::next_question_token(bool must_terminate,
                                                          Rng& rng) {
  policy_->token_distribution(state_, dist_.data());
  const Token token =
      must_terminate
          ? kQuestionMark
          : sample_categorical(dist_.data(), kVocabSize, rng);
  const double p = dist_[static_cast<size_t>(token)];
  policy_->advance(state_, token, scratch_);
  return {token, p};
}

void PolicyAgent::observe_answer(Token answer) {
  policy_->advance(state_, answer, scratch_);
}

uint64_t grid_hash(const GridImage& grid) {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (uint16_t code : grid.key()) h = splitmix64(h ^ code);
  return h;
}

ReplayAgent::ReplayAgent(const std::vector<GameRecord>& records)
    : records_(&records) {
  by_grid_.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = by_grid_.emplace(grid_hash(records[i].grid), i);
    if (!inserted && !(records[it->second].grid == records[i].grid)) {
      throw SupportMismatch("grid hash collision in replay set");
    }
  }
}

void ReplayAgent::begin(const GridImage& grid) {
  auto it = by_grid_.find(grid_hash(grid));
  if (it == by_grid_.end() || !((*records_)[it->second].grid == grid)) {
    throw SupportMismatch("no stored game for this grid");
  }
  current_ = &(*records_)[it->second];
  if (current_->dialog.empty()) {
    throw SupportMismatch("stored game has an empty dialog");
  }
  round_ = 0;
  pos_ = 0;
}

std::pair<Token, double> ReplayAgent::next_question_token(bool must_terminate,
                                                          Rng& rng) {
  (void)rng;
  assert(current_ != nullptr);
  const size_t last = current_->dialog.size() - 1;
  const std::vector<Token>& q =
      current_->dialog[std::min(round_, last)].question;
  if (pos_ >= q.size()) return {kQuestionMark, 1.0};
  const Token token = q[pos_++];
  if (must_terminate && token != kQuestionMark) {
    // The stored question does not fit the budget; close it out.
    return {kQuestionMark, 1.0};
  }
  return {token, 1.0};
}

void ReplayAgent::observe_answer(Token answer) {
  (void)answer;
  ++round_;
  pos_ = 0;
}

Trajectory rollout(RolloutAgent& agent, const GridImage& grid,
                   int target_index, int max_rounds, int max_qlen, Rng& rng) {
  assert(max_rounds >= 1 && max_qlen >= 1);
  Trajectory traj;
  traj.grid = grid;
  traj.target_index = target_index;
  traj.tokens.push_back(kSos);
  traj.action_mask.push_back(0);
  traj.probs.push_back(0.0);

  agent.begin(grid);
  std::vector<QAPair> dialog;
  dialog.reserve(static_cast<size_t>(max_rounds));
  for (int round = 0; round < max_rounds; ++round) {
    QAPair qa;
    for (int pos = 1; pos <= max_qlen; ++pos) {
      const bool must_terminate = pos == max_qlen;
      auto [token, p] = agent.next_question_token(must_terminate, rng);
      traj.tokens.push_back(token);
      traj.action_mask.push_back(1);
      traj.probs.push_back(p);
      qa.question.push_back(token);
      if (token == kQuestionMark) break;
    }
    qa.answer = answer(grid, target_index, qa.question);
    traj.tokens.push_back(qa.answer);
    traj.action_mask.push_back(0);
    traj.probs.push_back(0.0);
    agent.observe_answer(qa.answer);
    dialog.push_back(std::move(qa));
  }
  traj.guess_index = guess(grid, dialog, rng);
  traj.reward = reward(traj.guess_index, target_index);
  return traj;
}

}  // namespace pmrlab
