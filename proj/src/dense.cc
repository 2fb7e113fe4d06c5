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

#include "hivc/dense.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hivc/error.h"

namespace hivc {
namespace {

struct LuFactors {
  DenseMatrix lu;
  std::vector<int> perm;
};

LuFactors factor(DenseMatrix a) {
  const int n = a.rows();
  if (n != a.cols()) throw InvalidArgument("lu: matrix is not square");
  double scale = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) scale = std::max(scale, std::abs(a(r, c)));
  }
  const double eps = 1e-13 * (scale > 0.0 ? scale : 1.0);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::abs(a(r, k)) > std::abs(a(pivot, k))) pivot = r;
    }
    if (std::abs(a(pivot, k)) <= eps) {
      throw SingularSystemError("lu: singular matrix");
    }
    if (pivot != k) {
      for (int c = 0; c < n; ++c) std::swap(a(k, c), a(pivot, c));
      std::swap(perm[k], perm[pivot]);
    }
    const double inv = 1.0 / a(k, k);
    for (int r = k + 1; r < n; ++r) {
      const double f = a(r, k) * inv;
      a(r, k) = f;
      if (f == 0.0) continue;
      for (int c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return {std::move(a), std::move(perm)};
}

std::vector<double> substitute(const LuFactors& f, const std::vector<double>& b) {
  const int n = f.lu.rows();
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

}  // namespace

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product: shape");
  DenseMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double v = a(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += v * b(k, j);
    }
  }
  return out;
}

std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b) {
  if (static_cast<int>(b.size()) != a.rows()) {
    throw InvalidArgument("lu_solve: right-hand side has wrong length");
  }
  return substitute(factor(std::move(a)), b);
}

DenseMatrix lu_inverse(const DenseMatrix& a) {
  const LuFactors f = factor(a);
  const int n = a.rows();
  DenseMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (int c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    const std::vector<double> col = substitute(f, e);
    for (int r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

}  // namespace hivc
