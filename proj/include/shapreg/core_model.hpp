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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shapreg/matrix.hpp"

namespace shapreg {

// Error categories.
enum class ErrorKind {
  kMissingCoalition,
  kDuplicateCoalition,
  kEmptyPlayerList,
  kDuplicatePlayer,
  kConstantColumn,
  kTooFewRows,
  kNonNumericCell,
  kOutOfRange,
  kTooManyPlayers,
  kTooManyPartners,
  kDegenerateGame,
  kDimensionMismatch,
  kSingularSystem,
  kZeroOutcomeTotal,
  kZeroColumnSum,
  kZeroAttribution,
  kParseError,
  kHeaderMissing,
  kIoError,
  kUsageError,
  kNumericalFailure,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  // what() is "<KindName>: <detail>".
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Hard cap on players/partners.
inline constexpr int kMaxPlayers = 25;

struct PlayerId {
  std::string name;

  friend bool operator==(const PlayerId&, const PlayerId&) = default;
};

// A subset of players, bit i set when the i-th declared player is a member.
using Coalition = std::uint32_t;

inline constexpr bool Contains(Coalition c, int player) {
  return (c >> player) & 1u;
}
inline constexpr Coalition Singleton(int player) {
  return Coalition{1} << player;
}
inline constexpr Coalition GrandCoalition(int n) {
  return n >= 32 ? ~Coalition{0} : (Coalition{1} << n) - 1;
}
int CoalitionSize(Coalition c);

// Ordered, duplicate-free list of players in declaration order.
class PlayerList {
 public:
  PlayerList() = default;
  // Throws EmptyPlayerList, DuplicatePlayer, TooManyPlayers.
  explicit PlayerList(std::vector<PlayerId> players);
  static PlayerList FromNames(const std::vector<std::string>& names);

  int size() const { return static_cast<int>(players_.size()); }
  const PlayerId& operator[](int i) const { return players_[i]; }
  std::optional<int> IndexOf(std::string_view name) const;
  auto begin() const { return players_.begin(); }
  auto end() const { return players_.end(); }

  // "{A,B}" in declaration order; "{}" for the empty set.
  std::string Format(Coalition c) const;
  std::vector<std::string> Names(Coalition c) const;

 private:
  std::vector<PlayerId> players_;
};

// Characteristic function of a cooperative game. Payoffs are stored densely,
// indexed by coalition mask; index 0 is the empty-coalition baseline.
class CoalitionPayoffTable {
 public:
  // payoffs.size() must equal 2^players.size().
  CoalitionPayoffTable(PlayerList players, std::vector<double> payoffs);

  const PlayerList& players() const { return players_; }
  int size() const { return players_.size(); }
  double payoff(Coalition c) const { return payoffs_[c]; }
  double baseline() const { return payoffs_[0]; }
  double grand_payoff() const { return payoffs_.back(); }
  std::span<const double> payoffs() const { return payoffs_; }

 private:
  PlayerList players_;
  std::vector<double> payoffs_;
};

struct PayoffRow {
  std::vector<std::string> members;  // empty = baseline
  double payoff = 0.0;
};

// Builds a complete table. Players are in the given order; every one of the
// 2^n subsets must appear exactly once.
CoalitionPayoffTable ValidatePayoffTable(const std::vector<std::string>& players,
                                         const std::vector<PayoffRow>& rows);

// Time-series design matrix: one row per period, one column per partner.
class PartnerDataset {
 public:
  // Throws TooFewRows, ConstantColumn, DimensionMismatch.
  PartnerDataset(std::vector<std::string> dates, PlayerList partners, Matrix x,
                 std::vector<double> y, std::string outcome_name = "outcome");

  const std::vector<std::string>& dates() const { return dates_; }
  const PlayerList& partners() const { return partners_; }
  const Matrix& x() const { return x_; }
  std::span<const double> y() const { return y_; }
  const std::string& outcome_name() const { return outcome_name_; }
  int rows() const { return static_cast<int>(y_.size()); }
  int num_partners() const { return partners_.size(); }

 private:
  std::vector<std::string> dates_;
  PlayerList partners_;
  Matrix x_;
  std::vector<double> y_;
  std::string outcome_name_;
};

// Parsed-but-untyped table: header plus string cells, first column date,
// last column outcome.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Blank cells become 0. Throws NonNumericCell naming the 1-based data row and
// column header, plus the PartnerDataset construction errors.
PartnerDataset ValidateDataset(const RawTable& raw);

struct BreakdownRow {
  Coalition coalition = 0;
  Coalition complement = 0;
  double utility_with = 0.0;
  double utility_without = 0.0;
  double weight = 0.0;
  double marginal = 0.0;
  double weighted_contribution = 0.0;
};

// Per-player worksheet: every coalition containing the player, its weight and
// marginal contribution.
struct ShapleyBreakdown {
  int player = 0;
  std::vector<BreakdownRow> rows;
  double total = 0.0;
};

struct ImportanceEntry {
  double shapley_value = 0.0;
  std::optional<double> normalized_share;
  std::optional<double> attributed_outcome;
  std::optional<double> cost_per_outcome;
};

struct ImportanceReport {
  std::vector<ImportanceEntry> entries;  // declaration order
  double utility_full = 0.0;
  std::optional<double> outcome_total;
};

}  // namespace shapreg
