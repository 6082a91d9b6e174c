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

#include "tailproc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "tailproc/errors.hpp"

namespace tailproc {

namespace {

void check_params(const GpdParams& params) {
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
    throw std::invalid_argument("GPD shape gamma must be positive");
  }
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
    throw std::invalid_argument("GPD scale sigma must be positive");
  }
}

// Evaluates both equations at b, sharing the log1p pass.
class LmeSystem {
 public:
  LmeSystem(std::span<const double> y, double r) : y_(y), r_(r), logs_(y.size()) {}

  double gamma_of(double b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
      logs_[i] = std::log1p(b * y_[i]);
      sum += logs_[i];
    }
    return sum / static_cast<double>(y_.size());
  }

  double residual(double b) {
    const double gamma = gamma_of(b);
    const double exponent = r_ / gamma;
    double sum = 0.0;
    for (double l : logs_) sum += std::exp(exponent * l);
    return sum / static_cast<double>(y_.size()) - 1.0 / (1.0 - r_);
  }

 private:
  std::span<const double> y_;
  double r_;
  std::vector<double> logs_;
};

}  // namespace

double gpd_cdf(const GpdParams& params, double x) {
  check_params(params);
  if (!(x >= 0.0)) throw std::invalid_argument("GPD argument must be non-negative");
  return -std::expm1(-std::log1p(params.gamma * x / params.sigma) / params.gamma);
}

double gpd_quantile(const GpdParams& params, double p) {
  check_params(params);
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("probability must lie in [0, 1)");
  return params.sigma * std::expm1(-params.gamma * std::log1p(-p)) / params.gamma;
}

ExcessSample top_k_excesses(std::span<const double> series, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (k + 1 > series.size()) throw std::invalid_argument("k too large");
  std::vector<double> magnitudes(series.size());
  std::transform(series.begin(), series.end(), magnitudes.begin(),
                 [](double x) { return std::abs(x); });
  const auto kth = magnitudes.begin() + static_cast<std::ptrdiff_t>(k);
  std::nth_element(magnitudes.begin(), kth, magnitudes.end(), std::greater<>());
  ExcessSample sample;
  sample.threshold = *kth;
  sample.k = k;
  sample.n = series.size();
  sample.excesses.assign(magnitudes.begin(), kth);
  std::sort(sample.excesses.begin(), sample.excesses.end(), std::greater<>());
  for (auto& y : sample.excesses) y -= sample.threshold;
  return sample;
}

ExcessSample excess_sample_from_excesses(std::vector<double> excesses) {
  ExcessSample sample;
  std::sort(excesses.begin(), excesses.end(), std::greater<>());
  sample.k = excesses.size();
  sample.n = excesses.size();
  sample.excesses = std::move(excesses);
  return sample;
}

double lme_gamma_of_b(std::span<const double> excesses, double b) {
  return LmeSystem(excesses, -1.0).gamma_of(b);
}

double lme_moment_residual(std::span<const double> excesses, double b, double r) {
  return LmeSystem(excesses, r).residual(b);
}

LmeEstimate lme_fit(const ExcessSample& sample, double r) { return lme_fit(sample.excesses, r); }

LmeEstimate lme_fit(std::span<const double> y, double r) {
  if (!(r < 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be negative");
  if (y.size() < 2) throw std::invalid_argument("invalid sample: need at least two excesses");
  double total = 0.0;
  for (double v : y) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("invalid sample: excesses must be finite and non-negative");
    }
    total += v;
  }
  const double mean = total / static_cast<double>(y.size());
  if (!(mean > 0.0)) throw NumericalError("no LME solution found");

  LmeSystem system(y, r);
  LmeEstimate est;
  est.r = r;

  // Geometric bracket search in decades around 1 / mean.
  constexpr int kDecades = 12;
  double lo = 1.0 / mean;
  double g_lo = system.residual(lo);
  double hi = lo;
  double g_hi = g_lo;
  if (g_lo > 0.0) {
    int steps = 0;
    while (g_hi > 0.0 && steps < kDecades) {
      lo = hi;
      g_lo = g_hi;
      hi *= 10.0;
      g_hi = system.residual(hi);
      ++steps;
    }
  } else if (g_lo < 0.0) {
    int steps = 0;
    while (g_lo < 0.0 && steps < kDecades) {
      hi = lo;
      g_hi = g_lo;
      lo /= 10.0;
      g_lo = system.residual(lo);
      ++steps;
    }
  }
  if (!(g_lo >= 0.0 && g_hi <= 0.0) || std::isnan(g_lo) || std::isnan(g_hi)) {
    throw NumericalError("no LME solution found");
  }

  // Bisection; g is positive at lo and negative at hi.
  constexpr int kMaxIterations = 4000;
  while (g_lo != 0.0 && g_hi != 0.0 && est.iterations < kMaxIterations) {
    const bool narrow = hi - lo <= kLmeRelativeWidth * hi;
    const bool small = std::min(g_lo, -g_hi) <= kLmeResidualTolerance;
    if (narrow && small) break;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = system.residual(mid);
    ++est.iterations;
    if (std::isnan(g_mid)) throw NumericalError("no LME solution found");
    if (g_mid >= 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }

  const bool take_lo = std::abs(g_lo) <= std::abs(g_hi);
  est.b_hat = take_lo ? lo : hi;
  est.residual = take_lo ? std::abs(g_lo) : std::abs(g_hi);
  if (est.residual > kLmeResidualTolerance) {
    throw NumericalError("LME root did not reach the residual tolerance");
  }
  est.gamma_hat = system.gamma_of(est.b_hat);
  est.sigma_hat = est.gamma_hat / est.b_hat;
  return est;
}

}  // namespace tailproc
