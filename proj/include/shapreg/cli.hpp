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
#include <iosfwd>
#include <optional>

#include "shapreg/core_model.hpp"
#include "shapreg/data_io.hpp"

namespace shapreg::cli {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// Largest game that gets per-player worksheets.
inline constexpr int kMaxBreakdownPlayers = 12;

enum class Mode { kGame, kRegress };

struct RunConfig {
  Mode mode = Mode::kGame;
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;
  ReportFormat format = ReportFormat::kJson;
  bool emit_r2_table = false;
  std::optional<std::filesystem::path> emit_fitted;
  std::optional<std::filesystem::path> spend;
  std::optional<double> channel_total;
  bool deterministic = false;
  int max_partners = kMaxPlayers;
  std::optional<int> threads;

  // Throws UsageError when flags do not fit the subcommand.
  void Validate() const;
};

int ExitCodeFor(ErrorKind kind);

int CmdGame(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdRegress(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches. Never throws.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shapreg::cli
