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

#include "shapreg/coalition_game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "shapreg/subsets.hpp"

namespace shapreg {

namespace {

struct PlayerPass {
  double total = 0.0;
  bool negative = false;
};

// Sums one player's weighted marginals over coalitions in canonical order.
PlayerPass RunPlayer(const CoalitionPayoffTable& game,
                     const std::vector<Coalition>& order,
                     const std::vector<double>& weights, int player,
                     ShapleyBreakdown* breakdown) {
  PlayerPass pass;
  const Coalition bit = Singleton(player);
  if (breakdown != nullptr) {
    breakdown->player = player;
    breakdown->rows.reserve(order.size() / 2);
  }
  for (Coalition c : order) {
    if ((c & bit) == 0) continue;
    const Coalition without = c & ~bit;
    const double with_value = game.payoff(c);
    const double without_value = game.payoff(without);
    const double weight = weights[CoalitionSize(without)];
    const double marginal = with_value - without_value;
    const double weighted = weight * marginal;
    pass.total += weighted;
    pass.negative = pass.negative || marginal < 0.0;
    if (breakdown != nullptr) {
      breakdown->rows.push_back(BreakdownRow{c, without, with_value, without_value,
                                             weight, marginal, weighted});
    }
  }
  if (breakdown != nullptr) breakdown->total = pass.total;
  return pass;
}

GameShapleyResult Prepare(const CoalitionPayoffTable& game,
                          const ShapleyOptions& options,
                          std::vector<Coalition>& order,
                          std::vector<double>& weights) {
  const int n = game.size();
  order = EnumerateSubsets(n);
  weights.resize(n);
  for (int s = 0; s < n; ++s) weights[s] = ShapleyWeight(s, n);

  GameShapleyResult result;
  result.players = game.players();
  result.values.assign(n, 0.0);
  if (options.with_breakdowns) result.breakdowns.resize(n);
  result.baseline = game.baseline();
  result.grand_payoff = game.grand_payoff();
  return result;
}

void Finish(GameShapleyResult& result, const std::vector<char>& negative) {
  result.has_negative_marginals =
      std::any_of(negative.begin(), negative.end(), [](char f) { return f != 0; });
  double sum = 0.0;
  for (double v : result.values) sum += v;
  if (sum > 0.0) {
    std::vector<double> shares;
    shares.reserve(result.values.size());
    for (double v : result.values) shares.push_back(v / sum);
    result.shares = std::move(shares);
  }
}

}  // namespace

GameShapleyResult ShapleyValues(const CoalitionPayoffTable& game,
                                const ShapleyOptions& options) {
  std::vector<Coalition> order;
  std::vector<double> weights;
  GameShapleyResult result = Prepare(game, options, order, weights);
  const int n = game.size();
  std::vector<char> negative(n, 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    ShapleyBreakdown* b = options.with_breakdowns ? &result.breakdowns[i] : nullptr;
    const PlayerPass pass = RunPlayer(game, order, weights, i, b);
    result.values[i] = pass.total;
    negative[i] = pass.negative ? 1 : 0;
  }

  Finish(result, negative);
  return result;
}

GameShapleyResult ShapleyValuesSerial(const CoalitionPayoffTable& game,
                                      const ShapleyOptions& options) {
  std::vector<Coalition> order;
  std::vector<double> weights;
  GameShapleyResult result = Prepare(game, options, order, weights);
  const int n = game.size();
  std::vector<char> negative(n, 0);
  for (int i = 0; i < n; ++i) {
    ShapleyBreakdown* b = options.with_breakdowns ? &result.breakdowns[i] : nullptr;
    const PlayerPass pass = RunPlayer(game, order, weights, i, b);
    result.values[i] = pass.total;
    negative[i] = pass.negative ? 1 : 0;
  }
  Finish(result, negative);
  return result;
}

std::vector<double> PermutationOracle(const CoalitionPayoffTable& game) {
  const int n = game.size();
  if (n > 8) {
    throw Error(ErrorKind::kTooManyPlayers,
                "permutation oracle enumerates n! orders; n = " +
                    std::to_string(n) + " exceeds 8");
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> sums(n, 0.0);
  double orders = 0.0;
  do {
    Coalition joined = 0;
    for (int player : perm) {
      const Coalition next = joined | Singleton(player);
      sums[player] += game.payoff(next) - game.payoff(joined);
      joined = next;
    }
    orders += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& s : sums) s /= orders;
  return sums;
}

std::vector<double> Extrapolate(const GameShapleyResult& result,
                                double channel_total) {
  if (!result.shares) {
    throw Error(ErrorKind::kDegenerateGame,
                "Shapley values do not sum to a positive total");
  }
  if (!std::isfinite(channel_total)) {
    throw Error(ErrorKind::kOutOfRange, "channel total must be finite");
  }
  std::vector<double> out;
  out.reserve(result.shares->size());
  for (double share : *result.shares) out.push_back(channel_total * share);
  return out;
}

}  // namespace shapreg
