/*
Copyright 2026 The HIVC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef HIVC_DENSE_H_
#define HIVC_DENSE_H_

#include <span>
#include <vector>

namespace hivc {

// Small row-major dense matrix for the block systems and test-scale oracles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  DenseMatrix transposed() const;
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Solves A x = b by LU with partial pivoting. Throws SingularSystemError when
// a pivot falls below 1e-13 times the largest entry of A.
std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b);

// Inverse via the same factorization.
DenseMatrix lu_inverse(const DenseMatrix& a);

}  // namespace hivc

#endif  // HIVC_DENSE_H_
