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

#include "shapreg/shapley_regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "shapreg/subsets.hpp"

namespace shapreg {

std::vector<Coalition> EnumerateCoalitions(int n) {
  if (n < 1) {
    throw Error(ErrorKind::kEmptyPlayerList, "at least one partner is required");
  }
  if (n > kMaxPlayers) {
    throw Error(ErrorKind::kTooManyPartners,
                std::to_string(n) + " partners exceeds the limit of " +
                    std::to_string(kMaxPlayers));
  }
  return EnumerateSubsets(n);
}

CoalitionR2Table::CoalitionR2Table(PlayerList partners,
                                   std::vector<double> r_squared)
    : partners_(std::move(partners)), r_squared_(std::move(r_squared)) {
  if (r_squared_.size() != (size_t{1} << partners_.size())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "R^2 table needs 2^" + std::to_string(partners_.size()) +
                    " entries, got " + std::to_string(r_squared_.size()));
  }
  if (r_squared_[0] != 0.0) {
    throw Error(ErrorKind::kOutOfRange, "empty coalition must have R^2 = 0");
  }
}

double CoalitionR2Table::MaxMonotonicityViolation() const {
  double worst = -INFINITY;
  const int n = size();
  for (Coalition c = 0; c < r_squared_.size(); ++c) {
    for (int i = 0; i < n; ++i) {
      if (Contains(c, i)) continue;
      worst = std::max(worst, r_squared_[c] - r_squared_[c | Singleton(i)]);
    }
  }
  return worst;
}

CoalitionPayoffTable CoalitionR2Table::AsGame() const {
  return CoalitionPayoffTable(partners_, r_squared_);
}

namespace {

struct StandardizedData {
  Matrix x;
  std::vector<double> y;
};

StandardizedData StandardizeDataset(const PartnerDataset& dataset) {
  // PartnerDataset already rejects constant columns.
  StandardizedData out;
  out.x = Standardize(dataset.x()).first;
  out.y = StandardizeVector(dataset.y());
  return out;
}

double FitCoalition(const StandardizedData& data, Coalition c, Matrix& scratch) {
  const int m = data.x.rows();
  const int k = CoalitionSize(c);
  if (scratch.rows() != m || scratch.cols() != k) scratch = Matrix(m, k);
  int dst = 0;
  for (int i = 0; i < data.x.cols(); ++i) {
    if (!Contains(c, i)) continue;
    const auto src = data.x.col(i);
    std::copy(src.begin(), src.end(), scratch.col(dst++).begin());
  }
  return FitZeroIntercept(scratch, data.y).r_squared;
}

}  // namespace

CoalitionR2Table CoalitionR2Sweep(const PartnerDataset& dataset) {
  const int n = dataset.num_partners();
  EnumerateCoalitions(n);  // size check only
  const StandardizedData data = StandardizeDataset(dataset);
  const long long total = 1LL << n;
  std::vector<double> r2(static_cast<size_t>(total), 0.0);
  std::string failure;

#pragma omp parallel
  {
    Matrix scratch;
#pragma omp for schedule(dynamic, 32)
    for (long long c = 1; c < total; ++c) {
      try {
        r2[c] = FitCoalition(data, static_cast<Coalition>(c), scratch);
      } catch (const std::exception& e) {
#pragma omp critical(shapreg_sweep_error)
        if (failure.empty()) failure = e.what();
      }
    }
  }
  if (!failure.empty()) throw Error(ErrorKind::kNumericalFailure, failure);
  return CoalitionR2Table(dataset.partners(), std::move(r2));
}

CoalitionR2Table CoalitionR2SweepSerial(const PartnerDataset& dataset) {
  const int n = dataset.num_partners();
  EnumerateCoalitions(n);
  const StandardizedData data = StandardizeDataset(dataset);
  std::vector<double> r2(size_t{1} << n, 0.0);
  Matrix scratch;
  for (Coalition c = 1; c < r2.size(); ++c) {
    r2[c] = FitCoalition(data, c, scratch);
  }
  return CoalitionR2Table(dataset.partners(), std::move(r2));
}

RegressionImportance ShapleyImportance(const CoalitionR2Table& table,
                                       const ShapleyOptions& options) {
  RegressionImportance out;
  out.shapley = ShapleyValues(table.AsGame(), options);
  const auto& values = out.shapley.values;

  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= -kNegativeShapleyTolerance) continue;
    std::string dump = "negative Shapley value for " +
                       table.partners()[static_cast<int>(i)].name + "; values:";
    char buf[64];
    for (size_t j = 0; j < values.size(); ++j) {
      std::snprintf(buf, sizeof buf, " %s=%.17g",
                    table.partners()[static_cast<int>(j)].name.c_str(), values[j]);
      dump += buf;
    }
    std::snprintf(buf, sizeof buf, "; max monotonicity violation %.3g",
                  table.MaxMonotonicityViolation());
    dump += buf;
    throw Error(ErrorKind::kNumericalFailure, dump);
  }

  out.report.utility_full = table.r_squared(GrandCoalition(table.size()));
  out.report.entries.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out.report.entries[i].shapley_value = values[i];
    if (out.shapley.shares) {
      out.report.entries[i].normalized_share = (*out.shapley.shares)[i];
    }
  }
  return out;
}

std::vector<double> AttributeOutcome(std::span<const double> shares,
                                     std::span<const double> y_raw) {
  double total = 0.0;
  for (double v : y_raw) total += v;
  if (!(std::abs(total) >= 1e-12 * static_cast<double>(y_raw.size()))) {
    throw Error(ErrorKind::kZeroOutcomeTotal,
                "outcome column sums to ~0; attribution needs raw-scale "
                "(not mean-centered) outcomes");
  }
  std::vector<double> out;
  out.reserve(shares.size());
  for (double s : shares) out.push_back(total * s);
  return out;
}

CoefficientSet DeriveCoefficients(std::span<const double> attributed,
                                  const PartnerDataset& dataset) {
  const int n = dataset.num_partners();
  if (static_cast<int>(attributed.size()) != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::to_string(attributed.size()) + " attributed totals for " +
                    std::to_string(n) + " partners");
  }
  CoefficientSet out;
  out.attributed_total.assign(attributed.begin(), attributed.end());
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    double abs_sum = 0.0;
    for (double v : dataset.x().col(i)) {
      sum += v;
      abs_sum += std::abs(v);
    }
    if (!(std::abs(sum) > 1e-12 * abs_sum)) {
      throw Error(ErrorKind::kZeroColumnSum,
                  dataset.partners()[i].name +
                      " (coefficients need raw, nonnegative activity data)");
    }
    out.beta.push_back(attributed[i] / sum);
  }
  try {
    out.comparison_ols = FitWithIntercept(dataset.x(), dataset.y());
  } catch (const Error& e) {
    out.comparison_note = e.what();
  }
  return out;
}

Prediction PredictSeries(const CoefficientSet& coefficients,
                         const PartnerDataset& dataset) {
  const int m = dataset.rows();
  const int n = dataset.num_partners();
  if (static_cast<int>(coefficients.beta.size()) != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "coefficient count does not match partner count");
  }
  Prediction out;
  out.actual.assign(dataset.y().begin(), dataset.y().end());
  out.fitted.assign(m, 0.0);
  out.contributions = Matrix(m, n);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const double part = coefficients.beta[i] * dataset.x()(j, i);
      out.contributions(j, i) = part;
      out.fitted[j] += part;
    }
  }
  return out;
}

double CostPerOutcome(double spend, double attributed) {
  if (spend == 0.0) return 0.0;
  if (!(attributed > 0.0)) {
    throw Error(ErrorKind::kZeroAttribution,
                "spend of " + std::to_string(spend) +
                    " with no positive attributed outcome");
  }
  return spend / attributed;
}

std::vector<std::optional<double>> PartnerEfficiency(
    std::span<const double> attributed, std::span<const double> spend) {
  if (attributed.size() != spend.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "spend and attribution vectors differ in length");
  }
  std::vector<std::optional<double>> out;
  for (size_t i = 0; i < spend.size(); ++i) {
    if (spend[i] != 0.0 && !(attributed[i] > 0.0)) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(CostPerOutcome(spend[i], attributed[i]));
    }
  }
  return out;
}

RegressionRun RunRegression(const PartnerDataset& dataset,
                            const RegressionOptions& options) {
  const int n = dataset.num_partners();
  if (n > options.max_partners) {
    throw Error(ErrorKind::kTooManyPartners,
                std::to_string(n) + " partners exceeds --max-partners " +
                    std::to_string(options.max_partners));
  }
  std::vector<std::string> warnings;
  if (n > kPartnerCostWarning) {
    warnings.push_back(std::to_string(n) + " partners: fitting 2^" +
                       std::to_string(n) + " = " + std::to_string(1LL << n) +
                       " coalitions may take a while");
  }

  CoalitionR2Table table = options.serial ? CoalitionR2SweepSerial(dataset)
                                          : CoalitionR2Sweep(dataset);
  ShapleyOptions shapley_options;
  shapley_options.with_breakdowns = options.with_breakdowns;
  RegressionImportance importance = ShapleyImportance(table, shapley_options);

  RegressionRun run{std::move(table), std::move(importance), std::nullopt,
                    std::nullopt, std::move(warnings)};
  if (!run.importance.shapley.shares) {
    run.warnings.push_back(
        "Shapley values sum to zero; shares, attribution and coefficients "
        "skipped");
    return run;
  }

  std::vector<double> attributed;
  try {
    attributed = AttributeOutcome(*run.importance.shapley.shares, dataset.y());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kZeroOutcomeTotal) throw;
    run.warnings.push_back(std::string(e.what()) +
                           "; attribution and coefficients skipped");
    return run;
  }

  double outcome_total = 0.0;
  for (double v : dataset.y()) outcome_total += v;
  run.importance.report.outcome_total = outcome_total;
  for (int i = 0; i < n; ++i) {
    run.importance.report.entries[i].attributed_outcome = attributed[i];
  }
  if (options.spend) {
    const auto eff = PartnerEfficiency(attributed, *options.spend);
    for (int i = 0; i < n; ++i) {
      run.importance.report.entries[i].cost_per_outcome = eff[i];
      if (!eff[i]) {
        run.warnings.push_back("cost per outcome not computable for " +
                               dataset.partners()[i].name +
                               " (spend with no positive attribution)");
      }
    }
  }

  try {
    run.coefficients = DeriveCoefficients(attributed, dataset);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kZeroColumnSum) throw;
    run.warnings.push_back(std::string(e.what()) + "; coefficients skipped");
    return run;
  }
  if (run.coefficients->comparison_note) {
    run.warnings.push_back("OLS comparison unavailable: " +
                           *run.coefficients->comparison_note);
  }
  run.prediction = PredictSeries(*run.coefficients, dataset);
  return run;
}

}  // namespace shapreg
