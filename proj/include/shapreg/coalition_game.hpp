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

#include <optional>
#include <span>
#include <vector>

#include "shapreg/core_model.hpp"

namespace shapreg {

struct GameShapleyResult {
  PlayerList players;
  // One worksheet per player, declaration order. Empty when breakdowns were
  // not requested.
  std::vector<ShapleyBreakdown> breakdowns;
  std::vector<double> values;
  // values[i] / sum(values); absent when the sum is not positive.
  std::optional<std::vector<double>> shares;
  double baseline = 0.0;
  double grand_payoff = 0.0;
  // Set when any marginal contribution is negative (e.g. a test market sold
  // below baseline). Values are reported as computed, never clamped.
  bool has_negative_marginals = false;
};

struct ShapleyOptions {
  bool with_breakdowns = true;
};

// Exact Shapley values by subset enumeration. Players are processed in
// parallel; each player's sum runs in a fixed order so the result does not
// depend on the thread count.
GameShapleyResult ShapleyValues(const CoalitionPayoffTable& game,
                                const ShapleyOptions& options = {});

// Single-threaded reference for ShapleyValues. Bit-identical output.
GameShapleyResult ShapleyValuesSerial(const CoalitionPayoffTable& game,
                                      const ShapleyOptions& options = {});

// Average marginal contribution over all n! join orders. Independent of the
// subset formula; used as a test oracle. Throws TooManyPlayers for n > 8.
std::vector<double> PermutationOracle(const CoalitionPayoffTable& game);

// channel_total * share_i using unrounded shares.
// Throws DegenerateGame when the values do not sum to a positive number.
std::vector<double> Extrapolate(const GameShapleyResult& result,
                                double channel_total);

}  // namespace shapreg
