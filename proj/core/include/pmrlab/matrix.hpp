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

#ifndef PMRLAB_MATRIX_HPP_
#define PMRLAB_MATRIX_HPP_

#include <cassert>
#include <cstddef>
#include <vector>

namespace pmrlab {

// Dense row-major f64 matrix. Vectors are 1-column matrices. All model
// state is f64; training at this scale is memory-light and the tests pin
// gradients against 1e-4 finite-difference tolerances.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0.0) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double& at(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c)];
  }
  double at(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c)];
  }

  double* row(int r) {
    assert(r >= 0 && r < rows_);
    return data_.data() + static_cast<size_t>(r) * static_cast<size_t>(cols_);
  }
  const double* row(int r) const {
    assert(r >= 0 && r < rows_);
    return data_.data() + static_cast<size_t>(r) * static_cast<size_t>(cols_);
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void zero() { data_.assign(data_.size(), 0.0); }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace pmrlab

#endif  // PMRLAB_MATRIX_HPP_
