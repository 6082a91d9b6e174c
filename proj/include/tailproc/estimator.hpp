// Copyright 2026 The tailproc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Generalized Pareto utilities and the likelihood moment estimator (LME)
// fitted to the excesses of the k largest absolute values over the
// (k+1)th largest.

#ifndef TAILPROC_ESTIMATOR_HPP_
#define TAILPROC_ESTIMATOR_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace tailproc {

/// GPD(gamma, sigma) with gamma > 0 and sigma > 0.
struct GpdParams {
  double gamma;
  double sigma;
};

/// 1 - (1 + gamma x / sigma)^(-1/gamma), x >= 0.
double gpd_cdf(const GpdParams& params, double x);

/// sigma ((1 - p)^(-gamma) - 1) / gamma, p in [0, 1).
double gpd_quantile(const GpdParams& params, double p);

struct ExcessSample {
  /// Y''_0 >= ... >= Y''_{k-1}, the top-k absolute values minus the threshold.
  std::vector<double> excesses;
  /// The (k+1)th largest absolute value.
  double threshold = 0.0;
  std::size_t k = 0;
  /// Length of the series the sample was drawn from.
  std::size_t n = 0;
};

/// Selects the k + 1 largest absolute values of `series`. Equal values at the
/// threshold are interchangeable, so the result does not depend on how ties
/// are ordered (conceptually: by original index).
/// Throws std::invalid_argument("k too large") when k + 1 > series.size().
ExcessSample top_k_excesses(std::span<const double> series, std::size_t k);

/// Wraps an already-computed excess sample (threshold 0, n = k).
ExcessSample excess_sample_from_excesses(std::vector<double> excesses);

struct LmeEstimate {
  double gamma_hat = 0.0;
  double sigma_hat = 0.0;
  /// The scalar root b = gamma / sigma.
  double b_hat = 0.0;
  /// |g(b_hat)| for the moment equation.
  double residual = 0.0;
  int iterations = 0;
  double r = 0.0;
};

inline constexpr double kLmeResidualTolerance = 1e-10;
inline constexpr double kLmeRelativeWidth = 1e-12;

/// Likelihood moment estimator with tuning exponent r < 0.
///
/// With b = gamma / sigma the system reduces to one equation:
///   gamma(b) = (1/k) sum log(1 + b Y_j)
///   g(b)     = (1/k) sum (1 + b Y_j)^(r / gamma(b)) - 1 / (1 - r) = 0.
/// g(0+) = mean(exp(r Y / Ybar)) - 1/(1 - r) and g(inf) = e^r - 1/(1 - r) < 0,
/// so a positive root exists exactly when the sample is heavier than
/// exponential in this sense. The root is bracketed by geometric expansion
/// over [1e-12, 1e12] / Ybar and refined by bisection.
///
/// Throws std::invalid_argument for r >= 0 ("r must be negative") or k < 2,
/// and NumericalError("no LME solution found") when g does not change sign.
LmeEstimate lme_fit(const ExcessSample& sample, double r);
LmeEstimate lme_fit(std::span<const double> excesses, double r);

/// gamma(b) from the log equation.
double lme_gamma_of_b(std::span<const double> excesses, double b);

/// g(b) from the moment equation.
double lme_moment_residual(std::span<const double> excesses, double b, double r);

}  // namespace tailproc

#endif  // TAILPROC_ESTIMATOR_HPP_
