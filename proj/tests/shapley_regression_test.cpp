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

#include <random>

#include "doctest.h"
#include "shapreg/data_io.hpp"
#include "test_support.hpp"

namespace shapreg {
namespace {

using doctest::Approx;

PartnerDataset WithOutcome(const PartnerDataset& d, std::vector<double> y) {
  return PartnerDataset(d.dates(), d.partners(), d.x(), std::move(y),
                        d.outcome_name());
}

PartnerDataset WithDuplicateOfFirst(const PartnerDataset& d) {
  const int n = d.num_partners();
  Matrix x(d.rows(), n + 1);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    std::copy(d.x().col(i).begin(), d.x().col(i).end(), x.col(i).begin());
    names.push_back(d.partners()[i].name);
  }
  std::copy(d.x().col(0).begin(), d.x().col(0).end(), x.col(n).begin());
  names.push_back(d.partners()[0].name + "_copy");
  return PartnerDataset(d.dates(), PlayerList::FromNames(names), std::move(x),
                        {d.y().begin(), d.y().end()});
}

TEST_CASE("coalition enumeration") {
  CHECK(EnumerateCoalitions(5).size() == 32);
  const std::vector<Coalition> three = {0, 1, 2, 4, 3, 5, 6, 7};
  CHECK(EnumerateCoalitions(3) == three);
  int with_a = 0;
  for (Coalition c : EnumerateCoalitions(5)) with_a += Contains(c, 0) ? 1 : 0;
  CHECK(with_a == 16);
  try {
    EnumerateCoalitions(26);
    FAIL("expected TooManyPartners");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooManyPartners);
  }
}

TEST_CASE("sweep on a single partner equal to the outcome") {
  const std::vector<double> v = {1, 4, 2, 8, 5};
  const PartnerDataset d({"a", "b", "c", "d", "e"}, PlayerList::FromNames({"A"}),
                         Matrix::FromColumns({v}), v);
  const auto table = CoalitionR2Sweep(d);
  CHECK(table.r_squared(0) == 0.0);
  CHECK(table.r_squared(1) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep on the published snapshot") {
  const auto d = LoadDatasetCsv(testing::DataPath("partner_snapshot.csv"));
  const auto table = CoalitionR2Sweep(d);
  const double full = table.r_squared(GrandCoalition(5));
  CHECK(full >= 0.0);
  CHECK(full <= 1.0);
  for (Coalition c = 0; c < 32; ++c) CHECK(table.r_squared(c) <= full + 1e-10);
  CHECK(table.MaxMonotonicityViolation() <= 1e-10);

  const auto oracle = testing::OracleR2Sweep(d);
  for (Coalition c = 0; c < 32; ++c) {
    CHECK(table.r_squared(c) == Approx(oracle[c]).epsilon(1e-10));
  }
}

TEST_CASE("full-coalition R^2 by two definitions on the comparison data") {
  const auto d = testing::HaldDataset();
  const auto table = CoalitionR2Sweep(d);
  const auto zx = Standardize(d.x()).first;
  const auto zy = StandardizeVector(d.y());
  const auto fit = FitZeroIntercept(zx, zy);
  // Explained-variance form vs residual form.
  double explained = 0.0;
  double total = 0.0;
  for (int r = 0; r < d.rows(); ++r) {
    explained += fit.fitted[r] * fit.fitted[r];
    total += zy[r] * zy[r];
  }
  CHECK(table.r_squared(15) == Approx(explained / total).epsilon(1e-12));
  CHECK(table.r_squared(15) == Approx(testing::OracleR2Sweep(d)[15]).epsilon(1e-12));
}

TEST_CASE("importance from the published R^2 table") {
  const auto imp = ShapleyImportance(testing::PublishedR2Table());
  const auto& a = imp.shapley.breakdowns[0];
  CHECK(a.rows.size() == 16);
  CHECK(std::abs(imp.shapley.values[0] - 0.213) < 0.001);
  CHECK(std::abs(*imp.report.entries[0].normalized_share - 0.24) < 0.01);
  double sum = 0.0;
  for (double v : imp.shapley.values) sum += v;
  CHECK(sum == Approx(0.889).epsilon(1e-12));
  CHECK(imp.report.utility_full == 0.889);
}

TEST_CASE("perfect collinearity splits credit evenly") {
  const CoalitionR2Table table(PlayerList::FromNames({"A", "B"}), {0, 0.5, 0.5, 0.5});
  const auto imp = ShapleyImportance(table);
  CHECK(imp.shapley.values[0] == Approx(0.25));
  CHECK(imp.shapley.values[1] == Approx(0.25));
}

TEST_CASE("negative importance is a numerical failure") {
  const CoalitionR2Table table(PlayerList::FromNames({"A", "B"}), {0, 0.5, 0.1, 0.2});
  try {
    ShapleyImportance(table);
    FAIL("expected NumericalFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumericalFailure);
    CHECK(e.detail().find("B=") != std::string::npos);
  }
}

TEST_CASE("importance matches the permutation oracle on random data") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = testing::RandomDataset(rng, 30, 4);
    const auto table = CoalitionR2Sweep(d);
    const auto imp = ShapleyImportance(table);
    const auto oracle = PermutationOracle(table.AsGame());
    for (int i = 0; i < 4; ++i) {
      CHECK(imp.shapley.values[i] == Approx(oracle[i]).epsilon(1e-9));
    }
    // Viewing the table as a game with baseline 0 gives exactly the same values.
    const auto game = ShapleyValues(table.AsGame());
    for (int i = 0; i < 4; ++i) CHECK(imp.shapley.values[i] == game.values[i]);
  }
}

TEST_CASE("attribution") {
  SUBCASE("market-test shares on ten million") {
    const std::vector<double> shares = {11500.0 / 72000, 26500.0 / 72000,
                                        34000.0 / 72000};
    const auto o = AttributeOutcome(shares, std::vector<double>{4e6, 6e6});
    CHECK(std::abs(o[0] - 1597222) < 1);
    CHECK(std::abs(o[1] - 3680556) < 1);
    CHECK(std::abs(o[2] - 4722222) < 1);
  }
  SUBCASE("single partner") {
    const auto o = AttributeOutcome(std::vector<double>{1.0},
                                    std::vector<double>{40, 2});
    CHECK(o[0] == 42.0);
  }
  SUBCASE("mean-centered outcome cannot be attributed") {
    const auto d = LoadDatasetCsv(testing::DataPath("partner_snapshot_centered.csv"));
    try {
      AttributeOutcome(std::vector<double>(5, 0.2), d.y());
      FAIL("expected ZeroOutcomeTotal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kZeroOutcomeTotal);
    }
  }
}

TEST_CASE("coefficients on the comparison dataset") {
  const auto d = testing::HaldDataset();
  const auto imp = ShapleyImportance(CoalitionR2Sweep(d));
  const auto o = AttributeOutcome(*imp.shapley.shares, d.y());
  const auto cs = DeriveCoefficients(o, d);
  const double expected[] = {3.24006, 0.5875, 1.11326, 0.99515};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(cs.beta[i] - expected[i]) < 1e-5);
  REQUIRE(cs.comparison_ols.has_value());
  CHECK(std::abs(cs.comparison_ols->intercept - 62.4) < 0.01);

  // sum_j sum_i beta_i x_ij == sum_j y_j.
  double lhs = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (double v : d.x().col(i)) lhs += cs.beta[i] * v;
  }
  CHECK(lhs == Approx(1240.5).epsilon(1e-12));
}

TEST_CASE("coefficient edge cases") {
  SUBCASE("one partner") {
    const PartnerDataset d({"a", "b", "c"}, PlayerList::FromNames({"A"}),
                           Matrix::FromColumns({{10, 15, 25}}), {1, 2, 3});
    const auto cs = DeriveCoefficients(std::vector<double>{100.0}, d);
    CHECK(cs.beta[0] == 2.0);
    // m = n + 2 leaves one residual degree of freedom.
    CHECK(cs.comparison_ols.has_value());
  }
  SUBCASE("zero column sum") {
    const PartnerDataset d({"a", "b", "c"}, PlayerList::FromNames({"A"}),
                           Matrix::FromColumns({{-1, 0, 1}}), {1, 2, 4});
    try {
      DeriveCoefficients(std::vector<double>{7.0}, d);
      FAIL("expected ZeroColumnSum");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kZeroColumnSum);
      CHECK(e.detail().rfind("A", 0) == 0);
    }
  }
  SUBCASE("too few rows for the OLS comparison") {
    const PartnerDataset d({"a", "b"}, PlayerList::FromNames({"A"}),
                           Matrix::FromColumns({{1, 2}}), {3, 5});
    const auto cs = DeriveCoefficients(std::vector<double>{8.0}, d);
    CHECK_FALSE(cs.comparison_ols.has_value());
    CHECK(cs.comparison_note.has_value());
  }
}

TEST_CASE("prediction") {
  const auto d = testing::HaldDataset();
  auto run = RunRegression(d);
  REQUIRE(run.prediction.has_value());
  double fitted = 0.0;
  for (double v : run.prediction->fitted) fitted += v;
  CHECK(std::abs(fitted - 1240.5) < 1e-6);
  for (int j = 0; j < d.rows(); ++j) {
    double parts = 0.0;
    for (int i = 0; i < 4; ++i) parts += run.prediction->contributions(j, i);
    CHECK(parts == Approx(run.prediction->fitted[j]).epsilon(1e-14));
  }

  SUBCASE("zero activity row predicts zero") {
    const PartnerDataset z({"a", "b", "c", "d"}, PlayerList::FromNames({"A", "B"}),
                           Matrix::FromColumns({{0, 2, 3, 1}, {0, 1, 1, 4}}),
                           {0.5, 3, 4, 6});
    CoefficientSet c2;
    c2.beta = {1.5, 0.5};
    CHECK(PredictSeries(c2, z).fitted[0] == 0.0);
  }
  SUBCASE("single partner identity") {
    const PartnerDataset one({"a", "b", "c"}, PlayerList::FromNames({"A"}),
                             Matrix::FromColumns({{2, 3, 5}}), {1, 2, 4});
    const auto c1 = DeriveCoefficients(std::vector<double>{30.0}, one);
    const auto p = PredictSeries(c1, one);
    CHECK(p.fitted[0] == Approx(30.0 * 2 / 10));
    CHECK(p.fitted[2] == Approx(30.0 * 5 / 10));
  }
}

TEST_CASE("partner efficiency") {
  CHECK(CostPerOutcome(1000, 500) == 2.0);
  CHECK(CostPerOutcome(0, 500) == 0.0);
  try {
    CostPerOutcome(1000, 0);
    FAIL("expected ZeroAttribution");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kZeroAttribution);
  }
  const auto eff = PartnerEfficiency(std::vector<double>{500, 500, 0},
                                     std::vector<double>{1000, 0, 1000});
  CHECK(eff[0] == 2.0);
  CHECK(eff[1] == 0.0);
  CHECK_FALSE(eff[2].has_value());
}

TEST_CASE("shares are invariant to outcome scale; attribution scales") {
  std::mt19937_64 rng(31);
  const auto d = testing::RandomDataset(rng, 25, 3);
  std::vector<double> scaled(d.y().begin(), d.y().end());
  for (double& v : scaled) v *= 7.5;
  const auto base = RunRegression(d);
  const auto big = RunRegression(WithOutcome(d, scaled));
  for (int i = 0; i < 3; ++i) {
    const auto& e0 = base.importance.report.entries[i];
    const auto& e1 = big.importance.report.entries[i];
    CHECK(e1.shapley_value == Approx(e0.shapley_value).epsilon(1e-12));
    CHECK(*e1.normalized_share == Approx(*e0.normalized_share).epsilon(1e-12));
    CHECK(*e1.attributed_outcome == Approx(7.5 * *e0.attributed_outcome).epsilon(1e-12));
  }
}

TEST_CASE("duplicated partner columns receive equal credit") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = WithDuplicateOfFirst(testing::RandomDataset(rng, 30, 3));
    const auto imp = ShapleyImportance(CoalitionR2Sweep(d));
    CHECK(imp.shapley.values[0] == Approx(imp.shapley.values[3]).epsilon(1e-9));
    double sum = 0.0;
    for (double v : imp.shapley.values) sum += v;
    CHECK(sum == Approx(imp.report.utility_full).epsilon(1e-9));
  }
}

TEST_CASE("pipeline on the published snapshot") {
  const auto d = LoadDatasetCsv(testing::DataPath("partner_snapshot.csv"));
  const auto run = RunRegression(d);
  double share_sum = 0.0;
  for (const auto& e : run.importance.report.entries) {
    CHECK(e.shapley_value >= -1e-10);
    share_sum += *e.normalized_share;
  }
  CHECK(share_sum == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pipeline skips attribution for a mean-centered outcome") {
  const auto d = LoadDatasetCsv(testing::DataPath("partner_snapshot_centered.csv"));
  const auto run = RunRegression(d);
  CHECK_FALSE(run.coefficients.has_value());
  CHECK_FALSE(run.importance.report.entries[0].attributed_outcome.has_value());
  REQUIRE_FALSE(run.warnings.empty());
  CHECK(run.warnings.back().find("ZeroOutcomeTotal") != std::string::npos);
}

TEST_CASE("max-partners limit") {
  const auto d = testing::HaldDataset();
  RegressionOptions options;
  options.max_partners = 3;
  try {
    RunRegression(d, options);
    FAIL("expected TooManyPartners");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooManyPartners);
  }
}

}  // namespace
}  // namespace shapreg
