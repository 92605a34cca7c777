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

#ifndef PMRLAB_NN_OPS_HPP_
#define PMRLAB_NN_OPS_HPP_

#include <vector>

#include "pmrlab/matrix.hpp"
#include "pmrlab/rng.hpp"

namespace pmrlab {

// Dense kernels used by the recurrent policy. Row-major weight layouts
// keep the inner loops contiguous; backward passes accumulate into the
// gradient matrices so multi-step losses sum naturally.

// y = W x (W: out x in).
void matvec(const Matrix& w, const double* x, double* y);
// dx += W^T dy.
void matvec_transpose_acc(const Matrix& w, const double* dy, double* dx);
// dW += dy x^T.
void outer_acc(Matrix& dw, const double* dy, const double* x);

// y = W x + b (b: out x 1).
void linear_forward(const Matrix& w, const Matrix& b, const double* x,
                    double* y);
// Accumulates dW, db; writes dx (pass nullptr to skip input gradients).
void linear_backward(const Matrix& w, const double* x, const double* dy,
                     Matrix& dw, Matrix& db, double* dx);

// One LSTM step. Weights pack the four gates row-blocks in the order
// [input, forget, cell, output]: W is (4H x (input_dim + H)) over the
// concatenation [x; h_prev], b is (4H x 1).
struct LstmStepCache {
  std::vector<double> h_prev, c_prev;
  std::vector<double> i, f, g, o;
  std::vector<double> c, tanh_c, h;

  void resize(int hidden);
};

void lstm_step_forward(const Matrix& w, const Matrix& b, const double* x,
                       int input_dim, const double* h_prev,
                       const double* c_prev, LstmStepCache& cache);

// dh/dc are gradients flowing into this step's outputs; dx, dh_prev and
// dc_prev are written (dx may be nullptr). dW/db accumulate.
void lstm_step_backward(const Matrix& w, const double* x, int input_dim,
                        const LstmStepCache& cache, const double* dh,
                        const double* dc, Matrix& dw, Matrix& db, double* dx,
                        double* dh_prev, double* dc_prev);

// Numerically stable (max-shifted) softmax / log-softmax.
void softmax(const double* logits, int n, double* out);
void log_softmax(const double* logits, int n, double* out);

// Draws an index by inverse CDF in index order. The vector must be
// nonnegative and sum to 1 within 1e-9; otherwise DegenerateDistribution.
int sample_categorical(const double* probs, int n, Rng& rng);

}  // namespace pmrlab

#endif  // PMRLAB_NN_OPS_HPP_
