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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shapreg/core_model.hpp"

namespace shapreg {

namespace {

constexpr double kMaxConditionEstimate = 1e12;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void CheckShape(const Matrix& x, std::span<const double> y, int extra_params) {
  if (x.rows() != static_cast<int>(y.size())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "X has " + std::to_string(x.rows()) + " rows but y has " +
                    std::to_string(y.size()) + " entries");
  }
  const int params = x.cols() + extra_params;
  if (x.rows() <= params) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::to_string(x.rows()) + " observations cannot determine " +
                    std::to_string(params) + " parameters");
  }
}

void FillResiduals(const Matrix& x, std::span<const double> y, FitResult& fit) {
  const int m = x.rows();
  fit.fitted.assign(m, fit.intercept);
  for (int c = 0; c < x.cols(); ++c) {
    const double b = fit.coefficients[c];
    const auto col = x.col(c);
    for (int r = 0; r < m; ++r) fit.fitted[r] += b * col[r];
  }
  double rss = 0.0;
  for (int r = 0; r < m; ++r) {
    const double e = y[r] - fit.fitted[r];
    rss += e * e;
  }
  fit.residual_sum_squares = rss;
}

}  // namespace

std::vector<double> StandardizeVector(std::span<const double> v) {
  Matrix m(static_cast<int>(v.size()), 1);
  std::copy(v.begin(), v.end(), m.col(0).begin());
  auto [z, params] = Standardize(m);
  auto col = z.col(0);
  return {col.begin(), col.end()};
}

std::pair<Matrix, StandardizationParams> Standardize(const Matrix& m) {
  const int rows = m.rows();
  StandardizationParams params;
  Matrix out(rows, m.cols());
  for (int c = 0; c < m.cols(); ++c) {
    const auto col = m.col(c);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (rows == 0 || *lo == *hi) {
      throw Error(ErrorKind::kConstantColumn, "column " + std::to_string(c));
    }
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= rows;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / rows);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw Error(ErrorKind::kConstantColumn, "column " + std::to_string(c));
    }
    auto dst = out.col(c);
    for (int r = 0; r < rows; ++r) dst[r] = (col[r] - mean) / sd;
    params.mean.push_back(mean);
    params.scale.push_back(sd);
  }
  return {std::move(out), std::move(params)};
}

namespace detail {

bool SolveNormalEquations(const Matrix& x, std::span<const double> y,
                          std::vector<double>& beta) {
  const int k = x.cols();
  // Equilibrate so the Gram matrix has a unit diagonal.
  std::vector<double> d(k);
  for (int i = 0; i < k; ++i) {
    d[i] = std::sqrt(Dot(x.col(i), x.col(i)));
    if (!(d[i] > 0.0)) return false;
  }
  // Lower triangle of the scaled Gram matrix, factored in place.
  Matrix l(k, k);
  std::vector<double> rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs[i] = Dot(x.col(i), y) / d[i];
    for (int j = 0; j <= i; ++j) {
      l(i, j) = Dot(x.col(i), x.col(j)) / (d[i] * d[j]);
    }
  }
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    double diag = l(j, j);
    for (int p = 0; p < j; ++p) diag -= l(j, p) * l(j, p);
    if (!(diag > 0.0)) return false;
    const double pivot = std::sqrt(diag);
    l(j, j) = pivot;
    max_pivot = std::max(max_pivot, pivot);
    min_pivot = std::min(min_pivot, pivot);
    for (int i = j + 1; i < k; ++i) {
      double v = l(i, j);
      for (int p = 0; p < j; ++p) v -= l(i, p) * l(j, p);
      l(i, j) = v / pivot;
    }
  }
  const double ratio = max_pivot / min_pivot;
  if (ratio * ratio > kMaxConditionEstimate) return false;

  // L z = rhs, then L^T w = z.
  std::vector<double> z(k);
  for (int i = 0; i < k; ++i) {
    double v = rhs[i];
    for (int p = 0; p < i; ++p) v -= l(i, p) * z[p];
    z[i] = v / l(i, i);
  }
  beta.assign(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double v = z[i];
    for (int p = i + 1; p < k; ++p) v -= l(p, i) * beta[p];
    beta[i] = v / l(i, i);
  }
  for (int i = 0; i < k; ++i) beta[i] /= d[i];
  return true;
}

int SolveMinimumNorm(const Matrix& x, std::span<const double> y,
                     std::vector<double>& beta) {
  const int m = x.rows();
  const int k = x.cols();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  Matrix a = x;
  Matrix v(k, k);
  for (int i = 0; i < k; ++i) v(i, i) = 1.0;

  // One-sided Jacobi: rotate column pairs until all are mutually orthogonal.
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        auto ap = a.col(p);
        auto aq = a.col(q);
        const double alpha = Dot(ap, ap);
        const double beta_ = Dot(aq, aq);
        const double gamma = Dot(ap, aq);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta_)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta_ - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int r = 0; r < m; ++r) {
          const double xp = ap[r];
          const double xq = aq[r];
          ap[r] = c * xp - s * xq;
          aq[r] = s * xp + c * xq;
        }
        auto vp = v.col(p);
        auto vq = v.col(q);
        for (int r = 0; r < k; ++r) {
          const double xp = vp[r];
          const double xq = vq[r];
          vp[r] = c * xp - s * xq;
          vq[r] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(k);
  double sigma_max = 0.0;
  for (int j = 0; j < k; ++j) {
    sigma[j] = std::sqrt(Dot(a.col(j), a.col(j)));
    sigma_max = std::max(sigma_max, sigma[j]);
  }
  const double tol = std::max(m, k) * eps * sigma_max;
  beta.assign(k, 0.0);
  int rank = 0;
  for (int j = 0; j < k; ++j) {
    if (!(sigma[j] > tol)) continue;
    ++rank;
    const double coef = Dot(a.col(j), y) / (sigma[j] * sigma[j]);
    const auto vj = v.col(j);
    for (int i = 0; i < k; ++i) beta[i] += vj[i] * coef;
  }
  return rank;
}

}  // namespace detail

FitResult FitZeroIntercept(const Matrix& x, std::span<const double> y) {
  CheckShape(x, y, 0);
  FitResult fit;
  if (x.cols() > 0 && !detail::SolveNormalEquations(x, y, fit.coefficients)) {
    detail::SolveMinimumNorm(x, y, fit.coefficients);
  }
  fit.coefficients.resize(x.cols(), 0.0);
  FillResiduals(x, y, fit);
  const double ss_tot = Dot(y, y);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - fit.residual_sum_squares / ss_tot : 0.0;
  return fit;
}

FitResult FitWithIntercept(const Matrix& x, std::span<const double> y) {
  CheckShape(x, y, 1);
  const int m = x.rows();
  const int k = x.cols();

  // Slopes from the centered zero-intercept problem.
  const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
  const bool y_constant = *y_lo == *y_hi;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= m;
  std::vector<double> yc(m);
  for (int r = 0; r < m; ++r) yc[r] = y_constant ? 0.0 : y[r] - y_mean;

  Matrix xc(m, k);
  std::vector<double> x_mean(k, 0.0);
  for (int c = 0; c < k; ++c) {
    for (double v : x.col(c)) x_mean[c] += v;
    x_mean[c] /= m;
    auto dst = xc.col(c);
    const auto src = x.col(c);
    for (int r = 0; r < m; ++r) dst[r] = src[r] - x_mean[c];
  }

  FitResult fit;
  if (k > 0 && !detail::SolveNormalEquations(xc, yc, fit.coefficients)) {
    const int rank = detail::SolveMinimumNorm(xc, yc, fit.coefficients);
    if (rank < k) {
      throw Error(ErrorKind::kSingularSystem,
                  "regressors plus constant have rank " +
                      std::to_string(rank + 1) + " < " + std::to_string(k + 1));
    }
  }
  fit.coefficients.resize(k, 0.0);
  fit.intercept = y_mean;
  for (int c = 0; c < k; ++c) fit.intercept -= fit.coefficients[c] * x_mean[c];
  FillResiduals(x, y, fit);
  const double ss_tot = y_constant ? 0.0 : Dot(yc, yc);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - fit.residual_sum_squares / ss_tot : 0.0;
  return fit;
}

}  // namespace shapreg
