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

#include "tailproc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tailproc {

namespace {

void check_domain(double gamma, double r) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (!(r < 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be negative");
}

// Accumulates positive and negative contributions separately.
class SplitSum {
 public:
  SplitSum& operator+=(double term) {
    (term >= 0.0 ? positive_ : negative_) += std::abs(term);
    return *this;
  }
  double value() const { return positive_ - negative_; }

 private:
  double positive_ = 0.0;
  double negative_ = 0.0;
};

struct PairSums {
  double min_power = 0.0;
  double power_ratio = 0.0;
  double log_ratio = 0.0;
};

PairSums pair_sums(std::span<const double> c, double gamma, double r) {
  const double p = 1.0 / gamma;
  PairSums sums;
  for (std::size_t lag = 1; lag < c.size(); ++lag) {
    for (std::size_t k = 0; k + lag < c.size(); ++k) {
      const double a = std::abs(c[k]);
      const double b = std::abs(c[k + lag]);
      if (a == 0.0 || b == 0.0) continue;
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      const double log_lo = std::log(lo);
      const double log_hi = std::log(hi);
      const double lo_power = std::exp(p * log_lo);
      sums.min_power += lo_power;
      sums.power_ratio += std::exp(p * (r * log_hi + (1.0 - r) * log_lo));
      sums.log_ratio += lo_power * (log_hi - log_lo);
    }
  }
  return sums;
}

double plain_norm(std::span<const double> c, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  double sum = 0.0;
  for (double v : c) {
    if (v != 0.0) sum += std::pow(std::abs(v), 1.0 / gamma);
  }
  if (!(sum > 0.0)) throw std::invalid_argument("degenerate coefficients");
  return sum;
}

}  // namespace

double norm_c(std::span<const double> coeffs, double gamma) { return plain_norm(coeffs, gamma); }

double norm_c(const CoefficientSequence& coeffs, double gamma, double* truncation_error) {
  const double value = plain_norm(coeffs.coeffs(), gamma);
  if (truncation_error != nullptr) *truncation_error = coeffs.tail_power_sum_bound(1.0 / gamma);
  return value;
}

PhiConstants phi_constants(std::span<const double> coeffs, double gamma, double r) {
  check_domain(gamma, r);
  PhiConstants phi;
  phi.gamma = gamma;
  phi.r = r;
  phi.norm_c = plain_norm(coeffs, gamma);
  const PairSums sums = pair_sums(coeffs, gamma, r);
  phi.phi1 = sums.min_power / phi.norm_c;
  phi.phi2 = sums.power_ratio / phi.norm_c;
  phi.phi3 = sums.log_ratio / phi.norm_c;
  return phi;
}

PhiConstants phi_constants(const CoefficientSequence& coeffs, double gamma, double r) {
  PhiConstants phi = phi_constants(coeffs.coeffs(), gamma, r);
  if (coeffs.tail_power_sum_bound(1.0) == 0.0) return phi;

  // Pairs touching the omitted tail: every summand is at most
  // sqrt(|c_k|^p |c_m|^p) (times 2/(p e) for the log-weighted sum), so their
  // total is bounded by (sum_all |c|^(p/2)) * (sum_tail |c|^(p/2)).
  const double p = 1.0 / gamma;
  const double tail_half = coeffs.tail_power_sum_bound(0.5 * p);
  double head_half = tail_half;
  for (double c : coeffs.coeffs()) head_half += std::pow(std::abs(c), 0.5 * p);
  const double pair_tail = head_half * tail_half;
  const double norm_tail = coeffs.tail_power_sum_bound(p);
  const double log_factor = std::max(1.0, 2.0 / (p * std::numbers::e));
  const double largest = std::max({phi.phi1, phi.phi2, phi.phi3});
  phi.truncation_error = (log_factor * pair_tail + largest * norm_tail) / phi.norm_c;
  return phi;
}

RawLimits raw_limits(double gamma, double r, const PhiConstants& phi) {
  check_domain(gamma, r);
  const double g = gamma;
  const double p1 = phi.phi1;
  const double p2 = phi.phi2;
  const double p3 = phi.phi3;
  const double one_r = 1.0 - r;
  const double power_core = -r + (1.0 - 2.0 * r) * p1 - p2;

  RawLimits out;
  out.t1 = 2.0 * g * (g + 2.0 * g * p1 + p3);
  out.t2 = -2.0 * r * power_core / (one_r * (1.0 - 2.0 * r));
  out.tI = 1.0 + 2.0 * p1;
  SplitSum cross;
  cross += -g * r * (2.0 - r);
  cross += (2.0 * r * r - 4.0 * r + 1.0) * g * p1;
  cross += -g * p2;
  cross += -r * one_r * p3;
  out.t12 = cross.value() / (one_r * one_r);
  out.t1I = g + 2.0 * g * p1 + p3;
  out.t2I = power_core / one_r;
  out.beta1p = g / (g + 1.0);
  out.beta2p = -r / (one_r + g);
  out.beta1 = g;
  out.beta2 = -r / one_r;
  return out;
}

Kappas kappas(double gamma, double r, const PhiConstants& phi) {
  check_domain(gamma, r);
  const double g = gamma;
  const double p1 = phi.phi1;
  const double p2 = phi.phi2;
  const double p3 = phi.phi3;
  const double one_r = 1.0 - r;
  const double shifted = one_r + g;  // 1 - r + gamma
  const double g1 = g + 1.0;
  const double quad = g * g + g + 1.0;

  Kappas out;
  out.kappa1 = ((1.0 + 2.0 * p1) * g * g * (2.0 * g * g + 2.0 * g + 1.0) + 2.0 * g * g * g1 * p3) /
               (g1 * g1);

  // -2 gamma r (gamma + 1) > 0 multiplies (-r + phi1 (1 - 2r) - phi2).
  const double lead = -2.0 * g * r * g1;
  SplitSum k2;
  k2 += lead * -r;
  k2 += lead * p1 * (1.0 - 2.0 * r);
  k2 += -lead * p2;
  k2 += r * r * one_r * (1.0 + 2.0 * p2);
  out.kappa2 = k2.value() / (one_r * (1.0 - 2.0 * r) * shifted * shifted);

  const double d_main = one_r * one_r * g1 * shifted;
  SplitSum k3;
  k3 += -g * r * ((2.0 - r) * quad - 1.0) / d_main;
  k3 += -g * (2.0 * r * (2.0 - r) * quad - (g * g + g + 3.0 * r - r * r)) / d_main * p1;
  k3 += -g * (g + r) / (one_r * one_r * g1) * p2;
  k3 += -g * r / (one_r * shifted) * p3;
  out.kappa3 = k3.value();
  return out;
}

Matrix2 sigma_matrix(const Kappas& k) {
  Matrix2 m;
  m << k.kappa1, -k.kappa3, -k.kappa3, k.kappa2;
  return m;
}

Matrix2 l_matrix(double gamma, double r) {
  check_domain(gamma, r);
  const double g = gamma;
  const double one_r = 1.0 - r;
  const double shape_entry = one_r * one_r * (1.0 + g - r) / (r * r);
  Matrix2 m;
  m << -one_r * (1.0 + g) / (g * r), shape_entry,  //
      (1.0 + g) / (g * r), -shape_entry;
  return m;
}

Matrix2 jacobian_limit(double gamma, double r) {
  check_domain(gamma, r);
  const double g = gamma;
  const double one_r = 1.0 - r;
  const double shifted = 1.0 + g - r;
  Matrix2 m;
  m << -g / (1.0 + g), -g / (1.0 + g),  //
      -r / (one_r * one_r * shifted), -r / (one_r * shifted);
  return m;
}

Eigen::Vector2d symmetric_eigenvalues(const Matrix2& m) {
  const double a = m(0, 0);
  const double d = m(1, 1);
  const double b = 0.5 * (m(0, 1) + m(1, 0));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  return {mean - radius, mean + radius};
}

bool is_symmetric_psd(const Matrix2& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(m(0, 1) - m(1, 0)) > tol * scale) return false;
  const Eigen::Vector2d ev = symmetric_eigenvalues(m);
  return ev(0) >= -tol * std::max(1.0, std::abs(ev(1)));
}

CovarianceReport estimator_cov(double gamma, double r, const CoefficientSequence& coeffs) {
  CovarianceReport report;
  report.phi = phi_constants(coeffs, gamma, r);
  report.raw = raw_limits(gamma, r, report.phi);
  report.kappa = kappas(gamma, r, report.phi);
  report.sigma_matrix = sigma_matrix(report.kappa);
  report.l_matrix = l_matrix(gamma, r);
  Matrix2 cov = report.l_matrix * report.sigma_matrix * report.l_matrix.transpose();
  const double off = 0.5 * (cov(0, 1) + cov(1, 0));
  cov(0, 1) = off;
  cov(1, 0) = off;
  report.estimator_cov = cov;
  report.sigma_psd = is_symmetric_psd(report.sigma_matrix);
  report.estimator_cov_psd = is_symmetric_psd(report.estimator_cov);
  return report;
}

}  // namespace tailproc
