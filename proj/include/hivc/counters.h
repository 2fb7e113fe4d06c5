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

#ifndef HIVC_COUNTERS_H_
#define HIVC_COUNTERS_H_

#include <atomic>

namespace hivc::counters {

// Incremented by the encoder-only stages. Tests use them to show that
// decoding never fits block coefficients, estimates flow or builds
// subdivision trees.
inline std::atomic<long long> block_solves{0};
inline std::atomic<long long> flow_estimates{0};
inline std::atomic<long long> subdivisions{0};

inline void reset() {
  block_solves = 0;
  flow_estimates = 0;
  subdivisions = 0;
}

}  // namespace hivc::counters

#endif  // HIVC_COUNTERS_H_
