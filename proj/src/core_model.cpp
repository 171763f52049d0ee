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

#include "shapreg/core_model.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "shapreg/subsets.hpp"

namespace shapreg {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingCoalition: return "MissingCoalition";
    case ErrorKind::kDuplicateCoalition: return "DuplicateCoalition";
    case ErrorKind::kEmptyPlayerList: return "EmptyPlayerList";
    case ErrorKind::kDuplicatePlayer: return "DuplicatePlayer";
    case ErrorKind::kConstantColumn: return "ConstantColumn";
    case ErrorKind::kTooFewRows: return "TooFewRows";
    case ErrorKind::kNonNumericCell: return "NonNumericCell";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kTooManyPlayers: return "TooManyPlayers";
    case ErrorKind::kTooManyPartners: return "TooManyPartners";
    case ErrorKind::kDegenerateGame: return "DegenerateGame";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kSingularSystem: return "SingularSystem";
    case ErrorKind::kZeroOutcomeTotal: return "ZeroOutcomeTotal";
    case ErrorKind::kZeroColumnSum: return "ZeroColumnSum";
    case ErrorKind::kZeroAttribution: return "ZeroAttribution";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kHeaderMissing: return "HeaderMissing";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kUsageError: return "UsageError";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

int CoalitionSize(Coalition c) { return std::popcount(c); }

PlayerList::PlayerList(std::vector<PlayerId> players)
    : players_(std::move(players)) {
  if (players_.empty()) {
    throw Error(ErrorKind::kEmptyPlayerList, "at least one player is required");
  }
  if (players_.size() > static_cast<size_t>(kMaxPlayers)) {
    throw Error(ErrorKind::kTooManyPlayers,
                std::to_string(players_.size()) + " players exceeds the limit of " +
                    std::to_string(kMaxPlayers));
  }
  std::unordered_set<std::string> seen;
  for (const PlayerId& p : players_) {
    if (p.name.empty()) {
      throw Error(ErrorKind::kParseError, "player names must be non-empty");
    }
    if (!seen.insert(p.name).second) {
      throw Error(ErrorKind::kDuplicatePlayer, "'" + p.name + "' declared twice");
    }
  }
}

PlayerList PlayerList::FromNames(const std::vector<std::string>& names) {
  std::vector<PlayerId> ids;
  ids.reserve(names.size());
  for (const auto& n : names) ids.push_back(PlayerId{n});
  return PlayerList(std::move(ids));
}

std::optional<int> PlayerList::IndexOf(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (players_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> PlayerList::Names(Coalition c) const {
  std::vector<std::string> out;
  for (int i = 0; i < size(); ++i) {
    if (Contains(c, i)) out.push_back(players_[i].name);
  }
  return out;
}

std::string PlayerList::Format(Coalition c) const {
  std::string out = "{";
  bool first = true;
  for (const auto& name : Names(c)) {
    if (!first) out += ",";
    out += name;
    first = false;
  }
  return out + "}";
}

CoalitionPayoffTable::CoalitionPayoffTable(PlayerList players,
                                           std::vector<double> payoffs)
    : players_(std::move(players)), payoffs_(std::move(payoffs)) {
  if (players_.size() == 0) {
    throw Error(ErrorKind::kEmptyPlayerList, "a game needs at least one player");
  }
  const size_t expected = size_t{1} << players_.size();
  if (payoffs_.size() != expected) {
    throw Error(ErrorKind::kDimensionMismatch,
                "payoff vector has " + std::to_string(payoffs_.size()) +
                    " entries, expected " + std::to_string(expected));
  }
}

CoalitionPayoffTable ValidatePayoffTable(const std::vector<std::string>& players,
                                         const std::vector<PayoffRow>& rows) {
  PlayerList list = PlayerList::FromNames(players);
  const int n = list.size();
  std::vector<double> payoffs(size_t{1} << n, 0.0);
  std::vector<bool> present(payoffs.size(), false);

  for (const PayoffRow& row : rows) {
    Coalition mask = 0;
    const bool baseline =
        row.members.empty() || (row.members.size() == 1 && row.members[0] == "NA");
    if (!baseline) {
      for (const auto& member : row.members) {
        auto idx = list.IndexOf(member);
        if (!idx) {
          throw Error(ErrorKind::kParseError, "unknown player '" + member + "'");
        }
        if (Contains(mask, *idx)) {
          throw Error(ErrorKind::kParseError,
                      "player '" + member + "' listed twice in one coalition");
        }
        mask |= Singleton(*idx);
      }
    }
    if (present[mask]) {
      throw Error(ErrorKind::kDuplicateCoalition, list.Format(mask));
    }
    if (!std::isfinite(row.payoff)) {
      throw Error(ErrorKind::kParseError,
                  "non-finite payoff for " + list.Format(mask));
    }
    present[mask] = true;
    payoffs[mask] = row.payoff;
  }

  for (Coalition c : EnumerateSubsets(n)) {
    if (!present[c]) {
      throw Error(ErrorKind::kMissingCoalition,
                  c == 0 ? std::string("{} (baseline)") : list.Format(c));
    }
  }
  return CoalitionPayoffTable(std::move(list), std::move(payoffs));
}

namespace {

bool IsConstant(std::span<const double> v) {
  if (v.empty()) return true;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Blank -> 0, otherwise a finite decimal number or nullopt.
std::optional<double> ParseCell(std::string_view raw) {
  const std::string cell = Trim(raw);
  if (cell.empty()) return 0.0;
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

PartnerDataset::PartnerDataset(std::vector<std::string> dates, PlayerList partners,
                               Matrix x, std::vector<double> y,
                               std::string outcome_name)
    : dates_(std::move(dates)),
      partners_(std::move(partners)),
      x_(std::move(x)),
      y_(std::move(y)),
      outcome_name_(std::move(outcome_name)) {
  const int m = static_cast<int>(y_.size());
  const int n = partners_.size();
  if (x_.rows() != m || x_.cols() != n ||
      static_cast<int>(dates_.size()) != m) {
    throw Error(ErrorKind::kDimensionMismatch,
                "dataset has " + std::to_string(m) + " outcomes, " +
                    std::to_string(dates_.size()) + " dates and a " +
                    std::to_string(x_.rows()) + "x" + std::to_string(x_.cols()) +
                    " regressor matrix for " + std::to_string(n) + " partners");
  }
  if (m <= n) {
    throw Error(ErrorKind::kTooFewRows,
                std::to_string(m) + " rows for " + std::to_string(n) +
                    " partners; need at least " + std::to_string(n + 1));
  }
  for (int i = 0; i < n; ++i) {
    if (IsConstant(x_.col(i))) {
      throw Error(ErrorKind::kConstantColumn, partners_[i].name);
    }
  }
  if (IsConstant(y_)) {
    throw Error(ErrorKind::kConstantColumn, outcome_name_);
  }
}

PartnerDataset ValidateDataset(const RawTable& raw) {
  const auto& header = raw.header;
  if (header.size() < 3) {
    throw Error(ErrorKind::kHeaderMissing,
                "expected a date column, at least one partner column and an "
                "outcome column");
  }
  const int n = static_cast<int>(header.size()) - 2;
  const int m = static_cast<int>(raw.rows.size());

  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(Trim(header[i]));
  PlayerList partners = PlayerList::FromNames(names);

  std::vector<std::string> dates;
  Matrix x(m, n);
  std::vector<double> y(m);
  for (int r = 0; r < m; ++r) {
    const auto& row = raw.rows[r];
    if (row.size() != header.size()) {
      throw Error(ErrorKind::kParseError,
                  "row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    std::string date = Trim(row[0]);
    if (date.empty()) {
      throw Error(ErrorKind::kParseError,
                  "row " + std::to_string(r + 1) + " has an empty date label");
    }
    dates.push_back(std::move(date));
    for (int c = 1; c < static_cast<int>(row.size()); ++c) {
      auto value = ParseCell(row[c]);
      if (!value) {
        throw Error(ErrorKind::kNonNumericCell,
                    "value '" + Trim(row[c]) + "' at row " + std::to_string(r + 1) +
                        ", column \"" + Trim(header[c]) + "\"");
      }
      if (c <= n) {
        x(r, c - 1) = *value;
      } else {
        y[r] = *value;
      }
    }
  }
  return PartnerDataset(std::move(dates), std::move(partners), std::move(x),
                        std::move(y), Trim(header.back()));
}

}  // namespace shapreg
