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

#include <span>
#include <utility>
#include <vector>

#include "shapreg/matrix.hpp"

namespace shapreg {

struct StandardizationParams {
  std::vector<double> mean;
  std::vector<double> scale;  // population standard deviation (divisor m)
};

struct FitResult {
  std::vector<double> coefficients;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_sum_squares = 0.0;
  std::vector<double> fitted;
};

// Column-wise z-scores with the population standard deviation.
// Throws ConstantColumn naming the zero-based column index.
std::pair<Matrix, StandardizationParams> Standardize(const Matrix& m);
std::vector<double> StandardizeVector(std::span<const double> v);

// Least squares with no constant term. A rank-deficient X yields the
// minimum-norm solution. R^2 is 1 - SS_res / sum(y^2), which is the centered
// definition when y has zero mean. Throws DimensionMismatch.
FitResult FitZeroIntercept(const Matrix& x, std::span<const double> y);

// Ordinary least squares with a constant term. R^2 is centered and is 0 when
// y is constant. Throws DimensionMismatch or SingularSystem.
FitResult FitWithIntercept(const Matrix& x, std::span<const double> y);

namespace detail {

// Solver routes, exposed so tests can cross-check them against each other.

// Cholesky on the equilibrated normal equations. Returns false when the
// factorization breaks down or the condition estimate exceeds 1e12.
bool SolveNormalEquations(const Matrix& x, std::span<const double> y,
                          std::vector<double>& beta);

// Minimum-norm solution through a one-sided Jacobi SVD of X. Returns the
// numerical rank.
int SolveMinimumNorm(const Matrix& x, std::span<const double> y,
                     std::vector<double>& beta);

}  // namespace detail

}  // namespace shapreg
