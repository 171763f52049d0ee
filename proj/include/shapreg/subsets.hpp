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

#pragma once

#include <vector>

#include "shapreg/core_model.hpp"

namespace shapreg {

// All 2^n subsets of {0..n-1}: by size, then lexicographically by sorted
// member indices. The empty set comes first and the grand coalition last.
std::vector<Coalition> EnumerateSubsets(int n);

// Weight of a coalition of size s (excluding the player) in an n-player game:
// s!(n-s-1)!/n! = 1 / (n * C(n-1, s)).
// Throws OutOfRange unless 0 <= s < n.
double ShapleyWeight(int s, int n);

}  // namespace shapreg
