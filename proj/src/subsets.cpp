/*
 * Copyright 2026 The shapreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "shapreg/subsets.hpp"

#include <string>

namespace shapreg {

std::vector<Coalition> EnumerateSubsets(int n) {
  std::vector<Coalition> out;
  out.reserve(size_t{1} << n);
  out.push_back(0);
  std::vector<int> idx;
  for (int k = 1; k <= n; ++k) {
    idx.resize(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      Coalition mask = 0;
      for (int i : idx) mask |= Singleton(i);
      out.push_back(mask);
      // Advance to the next k-combination in lexicographic order.
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return out;
}

double ShapleyWeight(int s, int n) {
  if (n < 1 || s < 0 || s >= n) {
    throw Error(ErrorKind::kOutOfRange,
                "coalition size " + std::to_string(s) + " invalid for " +
                    std::to_string(n) + " players");
  }
  // C(n-1, s) by the multiplicative formula; exact in double for n <= 50.
  const int r = s < n - 1 - s ? s : n - 1 - s;
  double binom = 1.0;
  for (int i = 1; i <= r; ++i) {
    binom = binom * (n - 1 - r + i) / i;
  }
  return 1.0 / (static_cast<double>(n) * binom);
}

}  // namespace shapreg
