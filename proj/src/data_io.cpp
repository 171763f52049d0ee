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

#include "shapreg/data_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "shapreg/subsets.hpp"

namespace shapreg {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> ParseNumber(std::string_view raw) {
  const std::string cell = Trim(raw);
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

// CSV cell, quoted only when needed.
std::string CsvCell(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string JoinCoalition(const PlayerList& players, Coalition c) {
  std::string out;
  for (const auto& name : players.Names(c)) {
    if (!out.empty()) out += ';';
    out += name;
  }
  return out;
}

Json CoalitionJson(const PlayerList& players, Coalition c) {
  Json arr = Json::array();
  for (const auto& name : players.Names(c)) arr.push_back(name);
  return arr;
}

}  // namespace

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool row_has_content = false;
  size_t line = 1;

  auto end_row = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    if (row_has_content || row.size() > 1) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        cell += c;
        if (c != ' ' && c != '\t') row_has_content = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::kParseError,
                "unterminated quoted field at line " + std::to_string(line));
  }
  if (!cell.empty() || !row.empty()) end_row();
  return rows;
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kIoError, "read failed for " + path.string());
  return text;
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::kIoError, "write failed for " + path.string());
}

PartnerDataset ParseDatasetCsv(std::string_view text) {
  auto rows = ParseCsv(text);
  if (rows.empty()) throw Error(ErrorKind::kHeaderMissing, "file is empty");
  RawTable raw;
  raw.header = std::move(rows.front());
  bool header_numeric = raw.header.size() >= 2;
  for (size_t c = 1; c < raw.header.size(); ++c) {
    header_numeric = header_numeric && ParseNumber(raw.header[c]).has_value();
  }
  if (header_numeric) {
    throw Error(ErrorKind::kHeaderMissing,
                "first row holds numbers; expected column names");
  }
  raw.rows.assign(std::make_move_iterator(rows.begin() + 1),
                  std::make_move_iterator(rows.end()));
  try {
    return ValidateDataset(raw);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNonNumericCell) {
      throw Error(ErrorKind::kParseError, e.detail());
    }
    throw;
  }
}

PartnerDataset LoadDatasetCsv(const fs::path& path) {
  return ParseDatasetCsv(ReadTextFile(path));
}

std::string DatasetToCsv(const PartnerDataset& dataset) {
  std::string out = "date";
  for (const auto& p : dataset.partners()) out += "," + CsvCell(p.name);
  out += "," + CsvCell(dataset.outcome_name()) + "\n";
  for (int r = 0; r < dataset.rows(); ++r) {
    out += CsvCell(dataset.dates()[r]);
    for (int c = 0; c < dataset.num_partners(); ++c) {
      out += "," + FormatNumber(dataset.x()(r, c));
    }
    out += "," + FormatNumber(dataset.y()[r]) + "\n";
  }
  return out;
}

CoalitionPayoffTable ParsePayoffCsv(std::string_view text) {
  auto rows = ParseCsv(text);
  std::vector<std::string> players;
  std::vector<PayoffRow> parsed;
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 2) {
      throw Error(ErrorKind::kParseError,
                  "line " + std::to_string(r + 1) + ": expected 2 fields, got " +
                      std::to_string(row.size()));
    }
    auto payoff = ParseNumber(row[1]);
    if (!payoff) {
      if (r == 0) continue;  // header
      throw Error(ErrorKind::kParseError,
                  "line " + std::to_string(r + 1) + ": payoff '" + Trim(row[1]) +
                      "' is not a number");
    }
    PayoffRow out;
    out.payoff = *payoff;
    std::string_view members = row[0];
    size_t pos = 0;
    while (pos <= members.size()) {
      const size_t next = std::min(members.find(';', pos), members.size());
      std::string name = Trim(members.substr(pos, next - pos));
      if (!name.empty()) out.members.push_back(std::move(name));
      pos = next + 1;
    }
    if (out.members.size() == 1 && out.members[0] == "NA") out.members.clear();
    for (const auto& name : out.members) {
      if (std::find(players.begin(), players.end(), name) == players.end()) {
        players.push_back(name);
      }
    }
    parsed.push_back(std::move(out));
  }
  return ValidatePayoffTable(players, parsed);
}

CoalitionPayoffTable LoadPayoffCsv(const fs::path& path) {
  return ParsePayoffCsv(ReadTextFile(path));
}

std::string PayoffTableToCsv(const CoalitionPayoffTable& game) {
  std::string out = "coalition,payoff\n";
  for (Coalition c : EnumerateSubsets(game.size())) {
    out += (c == 0 ? std::string("NA") : CsvCell(JoinCoalition(game.players(), c))) +
           "," + FormatNumber(game.payoff(c)) + "\n";
  }
  return out;
}

std::vector<double> ParseSpendCsv(std::string_view text, const PlayerList& partners) {
  auto rows = ParseCsv(text);
  std::vector<double> spend(partners.size(), 0.0);
  std::vector<bool> seen(partners.size(), false);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 2) {
      throw Error(ErrorKind::kParseError,
                  "spend line " + std::to_string(r + 1) + ": expected 2 fields");
    }
    const std::string name = Trim(row[0]);
    auto idx = partners.IndexOf(name);
    if (!idx) {
      throw Error(ErrorKind::kParseError, "spend file names unknown partner '" +
                                              name + "'");
    }
    if (seen[*idx]) {
      throw Error(ErrorKind::kParseError, "spend listed twice for '" + name + "'");
    }
    auto value = ParseNumber(row[1]);
    if (!value || *value < 0.0) {
      throw Error(ErrorKind::kParseError,
                  "spend for '" + name + "' must be a nonnegative number");
    }
    seen[*idx] = true;
    spend[*idx] = *value;
  }
  return spend;
}

std::vector<double> LoadSpendCsv(const fs::path& path, const PlayerList& partners) {
  return ParseSpendCsv(ReadTextFile(path), partners);
}

std::string FormatNumber(double value) { return fmt::format("{:.17g}", value); }

std::string ReportToJson(const ReportDocument& doc) {
  Json root;
  Json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["mode"] = doc.metadata.mode;
  meta["input"] = doc.metadata.input_path;
  if (doc.metadata.timestamp) meta["timestamp"] = *doc.metadata.timestamp;
  meta["players"] = doc.metadata.players;
  if (doc.metadata.rows) meta["rows"] = *doc.metadata.rows;
  root["metadata"] = meta;

  Json importance;
  importance["utility_full"] = doc.importance.utility_full;
  if (doc.importance.outcome_total) {
    importance["outcome_total"] = *doc.importance.outcome_total;
  }
  Json entries = Json::array();
  for (size_t i = 0; i < doc.importance.entries.size(); ++i) {
    const auto& e = doc.importance.entries[i];
    Json entry;
    entry["player"] = doc.players[static_cast<int>(i)].name;
    entry["shapley_value"] = e.shapley_value;
    if (e.normalized_share) entry["normalized_share"] = *e.normalized_share;
    if (e.attributed_outcome) entry["attributed_outcome"] = *e.attributed_outcome;
    if (e.cost_per_outcome) entry["cost_per_outcome"] = *e.cost_per_outcome;
    entries.push_back(entry);
  }
  importance["entries"] = entries;
  root["importance"] = importance;

  if (doc.game) {
    Json game;
    game["baseline"] = doc.game->baseline;
    game["grand_payoff"] = doc.game->grand_payoff;
    game["has_negative_marginals"] = doc.game->has_negative_marginals;
    root["game"] = game;
  }

  if (!doc.breakdowns.empty()) {
    Json breakdowns = Json::array();
    for (const auto& b : doc.breakdowns) {
      Json jb;
      jb["player"] = doc.players[b.player].name;
      jb["total"] = b.total;
      Json rows = Json::array();
      for (const auto& row : b.rows) {
        Json jr;
        jr["coalition"] = CoalitionJson(doc.players, row.coalition);
        jr["complement"] = CoalitionJson(doc.players, row.complement);
        jr["utility_with"] = row.utility_with;
        jr["utility_without"] = row.utility_without;
        jr["weight"] = row.weight;
        jr["marginal"] = row.marginal;
        jr["weighted_contribution"] = row.weighted_contribution;
        rows.push_back(jr);
      }
      jb["rows"] = rows;
      breakdowns.push_back(jb);
    }
    root["breakdowns"] = breakdowns;
  }

  if (doc.coefficients) {
    const auto& cs = *doc.coefficients;
    Json coeffs;
    Json list = Json::array();
    for (size_t i = 0; i < cs.beta.size(); ++i) {
      Json e;
      e["player"] = doc.players[static_cast<int>(i)].name;
      e["beta"] = cs.beta[i];
      e["attributed_total"] = cs.attributed_total[i];
      list.push_back(e);
    }
    coeffs["shapley"] = list;
    coeffs["shapley_intercept"] = 0.0;
    if (cs.comparison_ols) {
      Json ols;
      Json betas = Json::array();
      for (size_t i = 0; i < cs.comparison_ols->coefficients.size(); ++i) {
        Json e;
        e["player"] = doc.players[static_cast<int>(i)].name;
        e["beta"] = cs.comparison_ols->coefficients[i];
        betas.push_back(e);
      }
      ols["coefficients"] = betas;
      ols["intercept"] = cs.comparison_ols->intercept;
      ols["r_squared"] = cs.comparison_ols->r_squared;
      coeffs["comparison_ols"] = ols;
    }
    root["coefficients"] = coeffs;
  }

  if (doc.r2_table) {
    Json table = Json::array();
    for (Coalition c : EnumerateSubsets(doc.r2_table->size())) {
      Json e;
      e["coalition"] = CoalitionJson(doc.players, c);
      e["r_squared"] = doc.r2_table->r_squared(c);
      table.push_back(e);
    }
    root["r2_table"] = table;
  }

  if (!doc.warnings.empty()) root["warnings"] = doc.warnings;
  return root.dump(2) + "\n";
}

void WriteReport(const ReportDocument& doc, const fs::path& path,
                 ReportFormat format) {
  if (format == ReportFormat::kJson) {
    WriteTextFile(path, ReportToJson(doc));
    return;
  }
  const fs::path dir = path.parent_path();
  const std::string stem = path.stem().string();
  auto section = [&](std::string_view name) {
    return dir / (stem + "." + std::string(name) + ".csv");
  };

  std::string importance =
      "player,shapley_value,normalized_share,attributed_outcome,cost_per_outcome\n";
  for (size_t i = 0; i < doc.importance.entries.size(); ++i) {
    const auto& e = doc.importance.entries[i];
    importance += CsvCell(doc.players[static_cast<int>(i)].name) + "," +
                  FormatNumber(e.shapley_value) + "," +
                  (e.normalized_share ? FormatNumber(*e.normalized_share) : "") + "," +
                  (e.attributed_outcome ? FormatNumber(*e.attributed_outcome) : "") +
                  "," + (e.cost_per_outcome ? FormatNumber(*e.cost_per_outcome) : "") +
                  "\n";
  }
  WriteTextFile(section("importance"), importance);

  if (!doc.breakdowns.empty()) {
    std::string out =
        "player,coalition,complement,utility_with,utility_without,weight,marginal,"
        "weighted_contribution\n";
    for (const auto& b : doc.breakdowns) {
      for (const auto& row : b.rows) {
        out += CsvCell(doc.players[b.player].name) + "," +
               CsvCell(JoinCoalition(doc.players, row.coalition)) + "," +
               CsvCell(JoinCoalition(doc.players, row.complement)) + "," +
               FormatNumber(row.utility_with) + "," +
               FormatNumber(row.utility_without) + "," + FormatNumber(row.weight) +
               "," + FormatNumber(row.marginal) + "," +
               FormatNumber(row.weighted_contribution) + "\n";
      }
    }
    WriteTextFile(section("breakdowns"), out);
  }

  if (doc.coefficients) {
    const auto& cs = *doc.coefficients;
    std::string out = "player,beta,attributed_total,ols_beta\n";
    for (size_t i = 0; i < cs.beta.size(); ++i) {
      out += CsvCell(doc.players[static_cast<int>(i)].name) + "," +
             FormatNumber(cs.beta[i]) + "," + FormatNumber(cs.attributed_total[i]) +
             "," +
             (cs.comparison_ols ? FormatNumber(cs.comparison_ols->coefficients[i])
                                : "") +
             "\n";
    }
    out += "(intercept),0,," +
           (cs.comparison_ols ? FormatNumber(cs.comparison_ols->intercept) : "") +
           "\n";
    WriteTextFile(section("coefficients"), out);
  }

  if (doc.r2_table) {
    std::string out = "coalition,r_squared\n";
    for (Coalition c : EnumerateSubsets(doc.r2_table->size())) {
      out += CsvCell(JoinCoalition(doc.players, c)) + "," +
             FormatNumber(doc.r2_table->r_squared(c)) + "\n";
    }
    WriteTextFile(section("r2"), out);
  }
}

std::string FittedSeriesToCsv(const Prediction& prediction,
                              const PartnerDataset& dataset) {
  std::string out = "date,actual,fitted";
  for (const auto& p : dataset.partners()) out += "," + CsvCell(p.name);
  out += "\n";
  for (int r = 0; r < dataset.rows(); ++r) {
    out += CsvCell(dataset.dates()[r]) + "," + FormatNumber(prediction.actual[r]) +
           "," + FormatNumber(prediction.fitted[r]);
    for (int c = 0; c < dataset.num_partners(); ++c) {
      out += "," + FormatNumber(prediction.contributions(r, c));
    }
    out += "\n";
  }
  return out;
}

void WriteFittedSeries(const Prediction& prediction, const PartnerDataset& dataset,
                       const fs::path& path) {
  WriteTextFile(path, FittedSeriesToCsv(prediction, dataset));
}

}  // namespace shapreg
