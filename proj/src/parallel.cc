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

#include "hivc/parallel.h"

#include <algorithm>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hivc {
namespace {

constexpr size_t kChunk = 4096;

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

int hardware_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

double deterministic_dot(std::span<const double> a,
                         std::span<const double> b) {
  const size_t n = std::min(a.size(), b.size());
  const size_t chunks = (n + kChunk - 1) / kChunk;
  if (chunks <= 1) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  std::vector<double> partial(chunks, 0.0);
  const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nc; ++c) {
    const size_t begin = static_cast<size_t>(c) * kChunk;
    const size_t end = std::min(n, begin + kChunk);
    double s = 0.0;
    for (size_t i = begin; i < end; ++i) s += a[i] * b[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double deterministic_sum(std::span<const double> a) {
  const size_t n = a.size();
  const size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static) if (nc > 1)
  for (long long c = 0; c < nc; ++c) {
    const size_t begin = static_cast<size_t>(c) * kChunk;
    const size_t end = std::min(n, begin + kChunk);
    double s = 0.0;
    for (size_t i = begin; i < end; ++i) s += a[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace hivc
