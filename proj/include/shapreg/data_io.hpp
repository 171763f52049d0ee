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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapreg/core_model.hpp"
#include "shapreg/shapley_regression.hpp"

namespace shapreg {

inline constexpr std::string_view kToolName = "shapreg";
inline constexpr std::string_view kToolVersion = "1.0.0";

// RFC 4180-ish reader: comma separated, double-quoted fields, LF or CRLF,
// optional UTF-8 BOM. Blank lines are skipped.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Dataset layout: header row; first column is the period label, last column
// the outcome, every column in between one partner. Blank cells read as 0.
PartnerDataset ParseDatasetCsv(std::string_view text);
PartnerDataset LoadDatasetCsv(const std::filesystem::path& path);
std::string DatasetToCsv(const PartnerDataset& dataset);

// Payoff layout: two columns, coalition and payoff. The coalition cell lists
// player names separated by ';'; empty or "NA" marks the baseline row. An
// optional header row is recognized by a non-numeric payoff cell. Players are
// declared in order of first appearance.
CoalitionPayoffTable ParsePayoffCsv(std::string_view text);
CoalitionPayoffTable LoadPayoffCsv(const std::filesystem::path& path);
// Inverse of ParsePayoffCsv, rows in canonical subset order.
std::string PayoffTableToCsv(const CoalitionPayoffTable& game);

// Spend layout: header row, then "partner,spend" rows. Partners without a
// row get zero spend; unknown partners are a ParseError.
std::vector<double> ParseSpendCsv(std::string_view text, const PlayerList& partners);
std::vector<double> LoadSpendCsv(const std::filesystem::path& path,
                                 const PlayerList& partners);

// 17 significant digits; round-trips any double.
std::string FormatNumber(double value);

struct ReportMetadata {
  std::string mode;  // "game" or "regress"
  std::string input_path;
  std::optional<std::string> timestamp;  // omitted in deterministic runs
  int players = 0;
  std::optional<int> rows;
};

struct GameSummary {
  double baseline = 0.0;
  double grand_payoff = 0.0;
  bool has_negative_marginals = false;
};

struct ReportDocument {
  ReportMetadata metadata;
  PlayerList players;
  ImportanceReport importance;
  std::vector<ShapleyBreakdown> breakdowns;
  std::optional<GameSummary> game;
  std::optional<CoefficientSet> coefficients;
  std::optional<CoalitionR2Table> r2_table;
  std::vector<std::string> warnings;
};

enum class ReportFormat { kJson, kCsv };

std::string ReportToJson(const ReportDocument& doc);

// CSV writes one file per section next to `path`:
// <stem>.importance.csv, <stem>.breakdowns.csv, <stem>.coefficients.csv,
// <stem>.r2.csv. Sections that are empty are not written.
void WriteReport(const ReportDocument& doc, const std::filesystem::path& path,
                 ReportFormat format);

// Columns: date, actual, fitted, then one contribution column per partner.
std::string FittedSeriesToCsv(const Prediction& prediction,
                              const PartnerDataset& dataset);
void WriteFittedSeries(const Prediction& prediction, const PartnerDataset& dataset,
                       const std::filesystem::path& path);

}  // namespace shapreg
