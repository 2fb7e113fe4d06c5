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

#ifndef HIVC_PARALLEL_H_
#define HIVC_PARALLEL_H_

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

namespace hivc {

// Thread control for the OpenMP kernels. Without OpenMP these report 1.
int max_threads();
void set_threads(int n);
int hardware_threads();

// Reductions whose result does not depend on the thread count: partial sums
// over fixed 4096-element chunks are combined serially in chunk order.
double deterministic_dot(std::span<const double> a, std::span<const double> b);
double deterministic_sum(std::span<const double> a);

// Exceptions must not leave an OpenMP region. Loop bodies run through
// capture(); the first exception (lowest iteration index) is rethrown after
// the loop by rethrow_if_any().
class ParallelErrors {
 public:
  template <typename Fn>
  void capture(long long index, Fn&& fn) {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_ || index < index_) {
        error_ = std::current_exception();
        index_ = index;
      }
    }
  }
  void rethrow_if_any() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
  long long index_ = 0;
};

}  // namespace hivc

#endif  // HIVC_PARALLEL_H_
