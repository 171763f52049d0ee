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
#include <string>
#include <vector>

#include "shapreg/coalition_game.hpp"
#include "shapreg/core_model.hpp"
#include "shapreg/least_squares.hpp"

namespace shapreg {

// Partner count above which a cost warning is issued.
inline constexpr int kPartnerCostWarning = 15;

// Shapley values below -tolerance raise NumericalFailure.
inline constexpr double kNegativeShapleyTolerance = 1e-10;

// All 2^n partner subsets, empty set first, by size then lexicographically.
// Throws TooManyPartners for n > 25 and EmptyPlayerList for n < 1.
std::vector<Coalition> EnumerateCoalitions(int n);

// R^2 of the zero-intercept standardized fit for every partner subset.
class CoalitionR2Table {
 public:
  // r_squared is indexed by coalition mask and must hold 2^n entries with
  // r_squared[0] == 0.
  CoalitionR2Table(PlayerList partners, std::vector<double> r_squared);

  const PlayerList& partners() const { return partners_; }
  int size() const { return partners_.size(); }
  double r_squared(Coalition c) const { return r_squared_[c]; }
  std::span<const double> values() const { return r_squared_; }

  // Largest violation of r2(S) <= r2(S + {i}) over all S and i; <= 0 when
  // the table is monotone under inclusion.
  double MaxMonotonicityViolation() const;

  CoalitionPayoffTable AsGame() const;

 private:
  PlayerList partners_;
  std::vector<double> r_squared_;
};

// Fits every coalition once, OpenMP over coalitions. Identical output for any
// thread count.
CoalitionR2Table CoalitionR2Sweep(const PartnerDataset& dataset);

// Single-threaded reference for CoalitionR2Sweep.
CoalitionR2Table CoalitionR2SweepSerial(const PartnerDataset& dataset);

struct RegressionImportance {
  GameShapleyResult shapley;
  ImportanceReport report;
};

// Shapley values with R^2 as the utility (baseline 0). Throws
// NumericalFailure, with a diagnostic dump, if any value is below -1e-10.
RegressionImportance ShapleyImportance(const CoalitionR2Table& table,
                                       const ShapleyOptions& options = {});

// O_i = sum(y) * share_i on the raw outcome scale.
// Throws ZeroOutcomeTotal when |sum(y)| < 1e-12 * m.
std::vector<double> AttributeOutcome(std::span<const double> shares,
                                     std::span<const double> y_raw);

struct CoefficientSet {
  std::vector<double> beta;
  std::vector<double> attributed_total;
  std::optional<FitResult> comparison_ols;
  std::optional<std::string> comparison_note;  // why the OLS row is absent
};

// beta_i = O_i / sum_j x_ij over the raw columns, plus an OLS-with-intercept
// comparison fit. Throws ZeroColumnSum naming the partner.
CoefficientSet DeriveCoefficients(std::span<const double> attributed,
                                  const PartnerDataset& dataset);

struct Prediction {
  std::vector<double> actual;
  std::vector<double> fitted;
  Matrix contributions;  // m x n, beta_i * x_ij
};

Prediction PredictSeries(const CoefficientSet& coefficients,
                         const PartnerDataset& dataset);

// spend / attributed; 0 for zero spend. Throws ZeroAttribution when spend is
// positive but nothing was attributed.
double CostPerOutcome(double spend, double attributed);

// Per-partner CostPerOutcome; nullopt marks a non-computable entry.
std::vector<std::optional<double>> PartnerEfficiency(
    std::span<const double> attributed, std::span<const double> spend);

struct RegressionOptions {
  bool with_breakdowns = true;
  int max_partners = kMaxPlayers;
  std::optional<std::vector<double>> spend;  // partner order
  bool serial = false;                       // use the reference kernels
};

struct RegressionRun {
  CoalitionR2Table r2_table;
  RegressionImportance importance;
  std::optional<CoefficientSet> coefficients;
  std::optional<Prediction> prediction;
  std::vector<std::string> warnings;
};

// Sweep, importance, then (when sum(y) is usable) attribution, coefficients
// and prediction.
RegressionRun RunRegression(const PartnerDataset& dataset,
                            const RegressionOptions& options = {});

}  // namespace shapreg
