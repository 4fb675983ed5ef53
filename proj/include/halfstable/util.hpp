// Copyright 2026 The halfstable Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HALFSTABLE_UTIL_HPP
#define HALFSTABLE_UTIL_HPP

#include <cmath>
#include <functional>
#include <thread>
#include <vector>

namespace halfstable {

/// Surface area of the unit sphere S^{k-1} in R^k (k=1 gives 2, the
/// counting measure of {-1,+1}).
inline double sphere_area(int k) {
  return 2.0 * std::pow(3.14159265358979323846264338328, 0.5 * k) /
         std::tgamma(0.5 * k);
}

/// Splits [0,n) into contiguous chunks over up to n_threads workers.
/// fn(first, last) must be safe to run concurrently on disjoint ranges.
inline void parallel_for(long n, int n_threads,
                         const std::function<void(long, long)>& fn) {
  if (n <= 0) return;
  const int workers = static_cast<int>(
      std::max<long>(1, std::min<long>(n_threads > 0 ? n_threads : 1, n)));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long first = w * chunk;
    const long last = std::min(n, first + chunk);
    if (first >= last) break;
    pool.emplace_back(fn, first, last);
  }
  for (auto& t : pool) t.join();
}

}  // namespace halfstable

#endif
