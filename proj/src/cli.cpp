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

#include "shapreg/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "shapreg/coalition_game.hpp"
#include "shapreg/shapley_regression.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shapreg::cli {

namespace {

constexpr const char* kFormatsHelp = R"(
Input formats (UTF-8, comma separated, '.' decimal separator):

  game --payoffs FILE
    Two columns: coalition,payoff. The coalition cell lists players joined
    by ';' (e.g. "Disney;ESPN"). An empty cell or NA is the baseline
    (empty coalition). All 2^n subsets must be present exactly once. An
    optional header row is allowed.

  regress --data FILE
    Header row required. First column: period label. Last column: outcome.
    Every column in between is one partner's activity (e.g. GRP). Blank
    cells are read as 0.

  --spend FILE (regress)
    Header row, then partner,spend rows. Missing partners have zero spend.

Exit codes: 0 ok, 1 I/O error, 2 validation or usage error, 3 numerical failure.
)";

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Percent(double share) {
  return fmt::format("{:.0f}%", std::round(share * 100.0));
}

size_t NameWidth(const PlayerList& players, size_t at_least) {
  size_t w = at_least;
  for (const auto& p : players) w = std::max(w, p.name.size());
  return w;
}

ReportMetadata Metadata(const RunConfig& config, std::string mode, int players) {
  ReportMetadata meta;
  meta.mode = std::move(mode);
  meta.input_path = config.input.string();
  if (!config.deterministic) meta.timestamp = UtcTimestamp();
  meta.players = players;
  return meta;
}

void ApplyThreads(const RunConfig& config) {
#ifdef _OPENMP
  if (config.threads) omp_set_num_threads(*config.threads);
#else
  (void)config;
#endif
}

}  // namespace

void RunConfig::Validate() const {
  if (channel_total && mode != Mode::kGame) {
    throw Error(ErrorKind::kUsageError, "--channel-total is only valid in game mode");
  }
  if (spend && mode != Mode::kRegress) {
    throw Error(ErrorKind::kUsageError, "--spend is only valid in regress mode");
  }
  if (emit_fitted && mode != Mode::kRegress) {
    throw Error(ErrorKind::kUsageError, "--emit-fitted is only valid in regress mode");
  }
  if (emit_r2_table && mode != Mode::kRegress) {
    throw Error(ErrorKind::kUsageError,
                "--emit-r2-table is only valid in regress mode");
  }
  if (max_partners < 1 || max_partners > kMaxPlayers) {
    throw Error(ErrorKind::kUsageError,
                "--max-partners must be between 1 and " + std::to_string(kMaxPlayers));
  }
  if (threads && *threads < 1) {
    throw Error(ErrorKind::kUsageError, "--threads must be at least 1");
  }
  if (channel_total && !std::isfinite(*channel_total)) {
    throw Error(ErrorKind::kUsageError, "--channel-total must be finite");
  }
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIoError: return kExitIo;
    case ErrorKind::kNumericalFailure: return kExitNumerical;
    default: return kExitValidation;
  }
}

int CmdGame(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.Validate();
  ApplyThreads(config);
  const CoalitionPayoffTable game = LoadPayoffCsv(config.input);
  const int n = game.size();
  ShapleyOptions options;
  options.with_breakdowns = n <= kMaxBreakdownPlayers;
  const GameShapleyResult result = ShapleyValues(game, options);

  ReportDocument doc;
  doc.metadata = Metadata(config, "game", n);
  doc.players = game.players();
  doc.importance.utility_full = game.grand_payoff();
  doc.importance.entries.resize(n);
  doc.breakdowns = result.breakdowns;
  doc.game = GameSummary{game.baseline(), game.grand_payoff(),
                         result.has_negative_marginals};

  std::optional<std::vector<double>> extrapolated;
  if (config.channel_total) {
    extrapolated = Extrapolate(result, *config.channel_total);
    doc.importance.outcome_total = *config.channel_total;
  }
  for (int i = 0; i < n; ++i) {
    auto& e = doc.importance.entries[i];
    e.shapley_value = result.values[i];
    if (result.shares) e.normalized_share = (*result.shares)[i];
    if (extrapolated) e.attributed_outcome = (*extrapolated)[i];
  }
  if (result.has_negative_marginals) {
    doc.warnings.push_back(
        "some coalitions sold below the coalition without the player "
        "(negative marginal contributions); values are reported unclamped");
  }
  if (!result.shares) {
    doc.warnings.push_back("Shapley values do not sum to a positive total; "
                           "shares are undefined");
  }
  if (!options.with_breakdowns) {
    doc.warnings.push_back("per-player worksheets omitted for more than " +
                           std::to_string(kMaxBreakdownPlayers) + " players");
  }

  const size_t w = NameWidth(game.players(), 6);
  fmt::print(out, "{:<{}}  {:>16}  {:>7}", "Player", w, "Shapley value", "Share");
  if (extrapolated) fmt::print(out, "  {:>18}", "Extrapolated");
  fmt::print(out, "\n");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += result.values[i];
    fmt::print(out, "{:<{}}  {:>16.3f}  {:>7}", game.players()[i].name, w,
               result.values[i], result.shares ? Percent((*result.shares)[i]) : "n/a");
    if (extrapolated) fmt::print(out, "  {:>18.3f}", (*extrapolated)[i]);
    fmt::print(out, "\n");
  }
  fmt::print(out, "{:<{}}  {:>16.3f}  {:>7}", "Total", w, total,
             result.shares ? "100%" : "n/a");
  if (extrapolated) fmt::print(out, "  {:>18.3f}", *config.channel_total);
  fmt::print(out, "\n");
  fmt::print(out, "Baseline (empty coalition): {:.3f}\n", game.baseline());

  for (const auto& warning : doc.warnings) fmt::print(err, "warning: {}\n", warning);
  if (config.output) WriteReport(doc, *config.output, config.format);
  return kExitOk;
}

int CmdRegress(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.Validate();
  ApplyThreads(config);
  const PartnerDataset dataset = LoadDatasetCsv(config.input);
  const int n = dataset.num_partners();

  RegressionOptions options;
  options.with_breakdowns = n <= kMaxBreakdownPlayers;
  options.max_partners = config.max_partners;
  if (config.spend) options.spend = LoadSpendCsv(*config.spend, dataset.partners());
  RegressionRun run = RunRegression(dataset, options);

  ReportDocument doc;
  doc.metadata = Metadata(config, "regress", n);
  doc.metadata.rows = dataset.rows();
  doc.players = dataset.partners();
  doc.importance = run.importance.report;
  doc.breakdowns = run.importance.shapley.breakdowns;
  doc.coefficients = run.coefficients;
  if (config.emit_r2_table) doc.r2_table = run.r2_table;
  doc.warnings = run.warnings;
  if (!options.with_breakdowns) {
    doc.warnings.push_back("per-partner worksheets omitted for more than " +
                           std::to_string(kMaxBreakdownPlayers) + " partners");
  }

  const auto& entries = run.importance.report.entries;
  const size_t w = NameWidth(dataset.partners(), 7);
  fmt::print(out, "{:<{}}  {:>13}  {:>16}\n", "Partner", w, "Shapley value",
             "Normalized share");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += entries[i].shapley_value;
    fmt::print(out, "{:<{}}  {:>13.3f}  {:>16}\n", dataset.partners()[i].name, w,
               entries[i].shapley_value,
               entries[i].normalized_share ? Percent(*entries[i].normalized_share)
                                           : "n/a");
  }
  fmt::print(out, "{:<{}}  {:>13.3f}  {:>16}\n", "Total", w, total, "100%");
  fmt::print(out, "R^2 of the full coalition: {:.3f}\n",
             run.importance.report.utility_full);

  if (run.coefficients) {
    const auto& cs = *run.coefficients;
    fmt::print(out, "\n{:<{}}  {:>18}  {:>12}  {:>12}", "Partner", w,
               "Attributed outcome", "Beta", "OLS beta");
    const bool with_eff = options.spend.has_value();
    if (with_eff) fmt::print(out, "  {:>16}", "Cost per outcome");
    fmt::print(out, "\n");
    for (int i = 0; i < n; ++i) {
      fmt::print(out, "{:<{}}  {:>18.3f}  {:>12.5f}  {:>12}", dataset.partners()[i].name,
                 w, cs.attributed_total[i], cs.beta[i],
                 cs.comparison_ols
                     ? fmt::format("{:.3f}", cs.comparison_ols->coefficients[i])
                     : std::string("n/a"));
      if (with_eff) {
        const auto& cpo = entries[i].cost_per_outcome;
        fmt::print(out, "  {:>16}", cpo ? fmt::format("{:.3f}", *cpo) : "n/a");
      }
      fmt::print(out, "\n");
    }
    fmt::print(out, "{:<{}}  {:>18}  {:>12.5f}  {:>12}\n", "Intercept", w, "", 0.0,
               cs.comparison_ols ? fmt::format("{:.3f}", cs.comparison_ols->intercept)
                                 : std::string("n/a"));
  }

  for (const auto& warning : doc.warnings) fmt::print(err, "warning: {}\n", warning);
  if (config.output) WriteReport(doc, *config.output, config.format);
  if (config.emit_fitted) {
    if (run.prediction) {
      WriteFittedSeries(*run.prediction, dataset, *config.emit_fitted);
    } else {
      fmt::print(err, "warning: no coefficients, fitted series not written\n");
    }
  }
  return kExitOk;
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Shapley attribution for coalition games and Shapley value "
               "regression on partner-level time series",
               "shapreg"};
  app.footer(kFormatsHelp);
  app.require_subcommand(1);

  RunConfig config;
  std::string format = "json";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", config.output, "Report path");
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--emit-r2-table", config.emit_r2_table,
                  "Include every coalition's R^2 in the report (regress)");
    sub->add_option("--emit-fitted", config.emit_fitted,
                    "Write date,actual,fitted,contributions CSV (regress)");
    sub->add_option("--spend", config.spend, "Partner spend CSV (regress)");
    sub->add_option("--channel-total", config.channel_total,
                    "Channel outcome to split by share (game)");
    sub->add_flag("--deterministic", config.deterministic,
                  "Omit the timestamp so identical inputs give identical files");
    sub->add_option("--max-partners", config.max_partners,
                    "Refuse inputs with more partners than this (<= 25)");
    sub->add_option("--threads", config.threads, "OpenMP thread count");
  };

  CLI::App* game = app.add_subcommand("game", "Shapley values from a payoff table");
  game->add_option("--payoffs", config.input, "Coalition payoff CSV")->required();
  add_common(game);

  CLI::App* regress =
      app.add_subcommand("regress", "Shapley value regression on a dataset CSV");
  regress->add_option("--data", config.input, "Dataset CSV")->required();
  add_common(regress);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  config.mode = game->parsed() ? Mode::kGame : Mode::kRegress;
  config.format = format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;

  try {
    return config.mode == Mode::kGame ? CmdGame(config, out, err)
                                      : CmdRegress(config, out, err);
  } catch (const Error& e) {
    fmt::print(err, "{}\n", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  }
}

}  // namespace shapreg::cli
