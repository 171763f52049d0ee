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

#include "shapreg/least_squares.hpp"

#include <random>

#include "doctest.h"
#include "shapreg/core_model.hpp"
#include "test_support.hpp"

namespace shapreg {
namespace {

using doctest::Approx;

Matrix RandomMatrix(std::mt19937_64& rng, int m, int k) {
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix x(m, k);
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < m; ++r) x(r, c) = z(rng);
  }
  return x;
}

std::vector<double> RandomVector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(m);
  for (double& x : v) x = z(rng);
  return v;
}

TEST_CASE("standardize a short column") {
  // mean 2, population sd sqrt(2/3): (x - 2) / sd = -+sqrt(3/2), 0.
  const auto z = StandardizeVector(std::vector<double>{1, 2, 3});
  CHECK(z[0] == Approx(-1.2247448713915890).epsilon(1e-14));
  CHECK(z[1] == Approx(0.0));
  CHECK(z[2] == Approx(1.2247448713915890).epsilon(1e-14));

  auto [m, params] = Standardize(Matrix::FromColumns({{1, 2, 3}}));
  CHECK(params.mean[0] == 2.0);
  CHECK(params.scale[0] == Approx(0.816496580927726).epsilon(1e-14));
}

TEST_CASE("standardize is idempotent") {
  std::mt19937_64 rng(11);
  const auto once = Standardize(RandomMatrix(rng, 40, 3)).first;
  const auto twice = Standardize(once).first;
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 40; ++r) CHECK(std::abs(once(r, c) - twice(r, c)) < 1e-12);
  }
}

TEST_CASE("standardized columns have zero mean and unit population sd") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = RandomMatrix(rng, 10 + trial, 4);
    for (int r = 0; r < x.rows(); ++r) x(r, 2) = 1e3 + 50.0 * x(r, 2);
    const auto z = Standardize(x).first;
    for (int c = 0; c < 4; ++c) {
      double mean = 0.0, ss = 0.0;
      for (double v : z.col(c)) mean += v;
      mean /= z.rows();
      for (double v : z.col(c)) ss += (v - mean) * (v - mean);
      CHECK(std::abs(mean) < 1e-12);
      CHECK(std::abs(std::sqrt(ss / z.rows()) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("constant column is rejected") {
  CHECK_THROWS_AS(Standardize(Matrix::FromColumns({{5, 5, 5}})), Error);
  try {
    Standardize(Matrix::FromColumns({{1, 2, 3}, {0.1, 0.1, 0.1}}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConstantColumn);
    CHECK(e.detail() == "column 1");
  }
}

TEST_CASE("zero-intercept fit: perfect fit and orthogonal regressor") {
  const std::vector<double> y = {1, 1, -1, -1};
  auto fit = FitZeroIntercept(Matrix::FromColumns({y}), y);
  CHECK(fit.coefficients[0] == Approx(1.0).epsilon(1e-14));
  CHECK(fit.r_squared == Approx(1.0).epsilon(1e-12));

  fit = FitZeroIntercept(Matrix::FromColumns({{1, -1, 1, -1}}), y);
  CHECK(std::abs(fit.coefficients[0]) < 1e-15);
  CHECK(std::abs(fit.r_squared) < 1e-15);
}

TEST_CASE("duplicated column resolves to the minimum-norm solution") {
  const std::vector<double> col = {1.5, -0.5, 0.25, -1.25};
  const auto x = Matrix::FromColumns({col, col});
  const auto fit = FitZeroIntercept(x, col);
  // Oracle: every b with b0 + b1 = 1 fits exactly; |b|^2 = b0^2 + (1-b0)^2 is
  // minimized at b0 = 1/2.
  CHECK(fit.coefficients[0] == Approx(0.5).epsilon(1e-12));
  CHECK(fit.coefficients[1] == Approx(0.5).epsilon(1e-12));
  CHECK(fit.r_squared == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank-deficient random design: min-norm matches the projection oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix x = RandomMatrix(rng, 15, 4);
    // Column 3 = column 0 - 2 * column 1.
    for (int r = 0; r < 15; ++r) x(r, 3) = x(r, 0) - 2.0 * x(r, 1);
    const auto y = RandomVector(rng, 15);
    const auto fit = FitZeroIntercept(x, y);
    std::vector<std::vector<double>> cols;
    for (int c = 0; c < 4; ++c) cols.emplace_back(x.col(c).begin(), x.col(c).end());
    CHECK(fit.r_squared == Approx(testing::OracleProjectionR2(cols, y)).epsilon(1e-10));
    // Minimum norm means beta is orthogonal to the null vector (1, -2, 0, -1).
    const auto& b = fit.coefficients;
    CHECK(std::abs(b[0] - 2.0 * b[1] - b[3]) < 1e-9);
  }
}

TEST_CASE("solver routes agree on full-rank problems") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 1 + trial % 6;
    const Matrix x = RandomMatrix(rng, 30, k);
    const auto y = RandomVector(rng, 30);
    std::vector<double> normal, svd;
    REQUIRE(detail::SolveNormalEquations(x, y, normal));
    CHECK(detail::SolveMinimumNorm(x, y, svd) == k);
    for (int i = 0; i < k; ++i) CHECK(normal[i] == Approx(svd[i]).epsilon(1e-10));
  }
}

TEST_CASE("residuals are orthogonal to the regressors") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = RandomMatrix(rng, 25, 5);
    const auto y = RandomVector(rng, 25);
    const auto fit = FitZeroIntercept(x, y);
    for (int c = 0; c < 5; ++c) {
      double g = 0.0;
      for (int r = 0; r < 25; ++r) g += x(r, c) * (y[r] - fit.fitted[r]);
      CHECK(std::abs(g) < 1e-9);
    }
  }
}

TEST_CASE("nested standardized fits never lose R^2") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 5;
    const Matrix x = Standardize(RandomMatrix(rng, 20 + trial % 7, k)).first;
    const auto y = StandardizeVector(RandomVector(rng, x.rows()));
    double previous = 0.0;
    for (int used = 1; used <= k; ++used) {
      Matrix sub(x.rows(), used);
      for (int c = 0; c < used; ++c) {
        std::copy(x.col(c).begin(), x.col(c).end(), sub.col(c).begin());
      }
      const double r2 = FitZeroIntercept(sub, y).r_squared;
      CHECK(r2 >= previous - 1e-10);
      CHECK(r2 <= 1.0 + 1e-12);
      previous = r2;
    }
  }
}

TEST_CASE("zero-intercept R^2 matches the projection oracle") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = RandomMatrix(rng, 18, 3);
    const auto y = RandomVector(rng, 18);
    std::vector<std::vector<double>> cols;
    for (int c = 0; c < 3; ++c) cols.emplace_back(x.col(c).begin(), x.col(c).end());
    CHECK(FitZeroIntercept(x, y).r_squared ==
          Approx(testing::OracleProjectionR2(cols, y)).epsilon(1e-12));
  }
}

TEST_CASE("OLS with intercept on the comparison dataset") {
  const auto d = testing::HaldDataset();
  const auto fit = FitWithIntercept(d.x(), d.y());
  CHECK(std::abs(fit.coefficients[0] - 1.551) < 0.01);
  CHECK(std::abs(fit.coefficients[1] - 0.510) < 0.01);
  CHECK(std::abs(fit.coefficients[2] - 0.102) < 0.01);
  CHECK(std::abs(fit.coefficients[3] + 0.144) < 0.01);
  CHECK(std::abs(fit.intercept - 62.4) < 0.01);
  CHECK(fit.r_squared > 0.98);
}

TEST_CASE("OLS edge cases") {
  SUBCASE("constant y") {
    const auto x = Matrix::FromColumns({{1, 4, 2, 8, 5}});
    const auto fit = FitWithIntercept(x, std::vector<double>{3, 3, 3, 3, 3});
    CHECK(std::abs(fit.coefficients[0]) < 1e-15);
    CHECK(fit.intercept == Approx(3.0));
    CHECK(fit.r_squared == 0.0);
  }
  SUBCASE("no regressors gives the mean") {
    const auto fit = FitWithIntercept(Matrix(4, 0), std::vector<double>{1, 2, 3, 6});
    CHECK(fit.intercept == Approx(3.0));
    CHECK(fit.coefficients.empty());
  }
  SUBCASE("collinear with the constant") {
    const auto x = Matrix::FromColumns({{1, 2, 3, 4, 5}, {3, 5, 7, 9, 11}});
    try {
      FitWithIntercept(x, std::vector<double>{1, 0, 2, 1, 3});
      FAIL("expected SingularSystem");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSingularSystem);
    }
  }
  SUBCASE("dimension mismatch") {
    const auto x = Matrix::FromColumns({{1, 2, 3}});
    CHECK_THROWS_AS(FitZeroIntercept(x, std::vector<double>{1, 2}), Error);
    CHECK_THROWS_AS(FitWithIntercept(x, std::vector<double>{1, 2, 3, 4}), Error);
  }
}

}  // namespace
}  // namespace shapreg
