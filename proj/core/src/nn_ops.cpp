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

#include "pmrlab/nn_ops.hpp"

#include <cassert>
#include <cmath>

#include "pmrlab/errors.hpp"

namespace pmrlab {

void matvec(const Matrix& w, const double* x, double* y) {
  const int rows = w.rows();
  const int cols = w.cols();
  for (int r = 0; r < rows; ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

void matvec_transpose_acc(const Matrix& w, const double* dy, double* dx) {
  const int rows = w.rows();
  const int cols = w.cols();
  for (int r = 0; r < rows; ++r) {
    const double coeff = dy[r];
    if (coeff == 0.0) continue;
    const double* wr = w.row(r);
    for (int c = 0; c < cols; ++c) dx[c] += coeff * wr[c];
  }
}

void outer_acc(Matrix& dw, const double* dy, const double* x) {
  const int rows = dw.rows();
  const int cols = dw.cols();
  for (int r = 0; r < rows; ++r) {
    const double coeff = dy[r];
    if (coeff == 0.0) continue;
    double* gr = dw.row(r);
    for (int c = 0; c < cols; ++c) gr[c] += coeff * x[c];
  }
}

void linear_forward(const Matrix& w, const Matrix& b, const double* x,
                    double* y) {
  assert(b.rows() == w.rows() && b.cols() == 1);
  matvec(w, x, y);
  const double* bias = b.data();
  for (int r = 0; r < w.rows(); ++r) y[r] += bias[r];
}

void linear_backward(const Matrix& w, const double* x, const double* dy,
                     Matrix& dw, Matrix& db, double* dx) {
  assert(dw.rows() == w.rows() && dw.cols() == w.cols());
  assert(db.rows() == w.rows() && db.cols() == 1);
  outer_acc(dw, dy, x);
  double* dbias = db.data();
  for (int r = 0; r < w.rows(); ++r) dbias[r] += dy[r];
  if (dx != nullptr) matvec_transpose_acc(w, dy, dx);
}

void LstmStepCache::resize(int hidden) {
  const auto h = static_cast<size_t>(hidden);
  h_prev.resize(h);
  c_prev.resize(h);
  i.resize(h);
  f.resize(h);
  g.resize(h);
  o.resize(h);
  c.resize(h);
  tanh_c.resize(h);
  this->h.resize(h);
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void lstm_step_forward(const Matrix& w, const Matrix& b, const double* x,
                       int input_dim, const double* h_prev,
                       const double* c_prev, LstmStepCache& cache) {
  const int hidden = w.rows() / 4;
  assert(w.rows() == 4 * hidden);
  assert(w.cols() == input_dim + hidden);
  assert(b.rows() == 4 * hidden && b.cols() == 1);
  cache.resize(hidden);

  const double* bias = b.data();
  for (int r = 0; r < 4 * hidden; ++r) {
    const double* wr = w.row(r);
    double z = bias[r];
    for (int c = 0; c < input_dim; ++c) z += wr[c] * x[c];
    for (int c = 0; c < hidden; ++c) z += wr[input_dim + c] * h_prev[c];
    const int unit = r % hidden;
    switch (r / hidden) {
      case 0:
        cache.i[static_cast<size_t>(unit)] = sigmoid(z);
        break;
      case 1:
        cache.f[static_cast<size_t>(unit)] = sigmoid(z);
        break;
      case 2:
        cache.g[static_cast<size_t>(unit)] = std::tanh(z);
        break;
      default:
        cache.o[static_cast<size_t>(unit)] = sigmoid(z);
        break;
    }
  }
  for (int u = 0; u < hidden; ++u) {
    const auto s = static_cast<size_t>(u);
    cache.h_prev[s] = h_prev[u];
    cache.c_prev[s] = c_prev[u];
    cache.c[s] = cache.f[s] * c_prev[u] + cache.i[s] * cache.g[s];
    cache.tanh_c[s] = std::tanh(cache.c[s]);
    cache.h[s] = cache.o[s] * cache.tanh_c[s];
  }
}

void lstm_step_backward(const Matrix& w, const double* x, int input_dim,
                        const LstmStepCache& cache, const double* dh,
                        const double* dc, Matrix& dw, Matrix& db, double* dx,
                        double* dh_prev, double* dc_prev) {
  const int hidden = w.rows() / 4;
  assert(static_cast<int>(cache.h.size()) == hidden);

  std::vector<double> dz(static_cast<size_t>(4 * hidden));
  for (int u = 0; u < hidden; ++u) {
    const auto s = static_cast<size_t>(u);
    const double i = cache.i[s];
    const double f = cache.f[s];
    const double g = cache.g[s];
    const double o = cache.o[s];
    const double tc = cache.tanh_c[s];
    const double dh_u = dh[u];
    const double dc_total = dc[u] + dh_u * o * (1.0 - tc * tc);
    dz[s] = dc_total * g * i * (1.0 - i);
    dz[static_cast<size_t>(hidden + u)] =
        dc_total * cache.c_prev[s] * f * (1.0 - f);
    dz[static_cast<size_t>(2 * hidden + u)] = dc_total * i * (1.0 - g * g);
    dz[static_cast<size_t>(3 * hidden + u)] = dh_u * tc * o * (1.0 - o);
    dc_prev[u] = dc_total * f;
  }

  double* dbias = db.data();
  for (int r = 0; r < 4 * hidden; ++r) {
    const double coeff = dz[static_cast<size_t>(r)];
    dbias[r] += coeff;
    if (coeff == 0.0) continue;
    double* gr = dw.row(r);
    for (int c = 0; c < input_dim; ++c) gr[c] += coeff * x[c];
    for (int c = 0; c < hidden; ++c) {
      gr[input_dim + c] += coeff * cache.h_prev[static_cast<size_t>(c)];
    }
  }

  for (int u = 0; u < hidden; ++u) dh_prev[u] = 0.0;
  if (dx != nullptr) {
    for (int c = 0; c < input_dim; ++c) dx[c] = 0.0;
  }
  for (int r = 0; r < 4 * hidden; ++r) {
    const double coeff = dz[static_cast<size_t>(r)];
    if (coeff == 0.0) continue;
    const double* wr = w.row(r);
    if (dx != nullptr) {
      for (int c = 0; c < input_dim; ++c) dx[c] += coeff * wr[c];
    }
    for (int c = 0; c < hidden; ++c) dh_prev[c] += coeff * wr[input_dim + c];
  }
}

void softmax(const double* logits, int n, double* out) {
  double max_logit = logits[0];
  for (int i = 1; i < n; ++i) max_logit = std::max(max_logit, logits[i]);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  const double inv = 1.0 / sum;
  for (int i = 0; i < n; ++i) out[i] *= inv;
}

void log_softmax(const double* logits, int n, double* out) {
  double max_logit = logits[0];
  for (int i = 1; i < n; ++i) max_logit = std::max(max_logit, logits[i]);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::exp(logits[i] - max_logit);
  const double log_sum = std::log(sum) + max_logit;
  for (int i = 0; i < n; ++i) out[i] = logits[i] - log_sum;
}

int sample_categorical(const double* probs, int n, Rng& rng) {
  assert(n > 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(probs[i] >= 0.0)) {
      throw DegenerateDistribution("negative or NaN probability");
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DegenerateDistribution("probabilities do not sum to 1");
  }
  const double u = rng.uniform_real() * sum;
  double acc = 0.0;
  int last_positive = -1;
  for (int i = 0; i < n; ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = i;
    if (u < acc) return i;
  }
  // Rounding can leave u in a vanishing tail past the last mass point.
  if (last_positive < 0) throw DegenerateDistribution("all-zero probabilities");
  return last_positive;
}

}  // namespace pmrlab
