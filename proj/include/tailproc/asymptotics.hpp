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

// Closed-form limit covariance of the likelihood moment estimator pair for a
// linear process with regularly varying innovations.
//
// Notation: gamma > 0 is the tail index of |Z|, r < 0 the LME exponent, and
// (c_j) the moving-average coefficients. Write m_{kj} = min(|c_k|, |c_{k+j}|),
// M_{kj} = max(|c_k|, |c_{k+j}|) and p = 1/gamma. Then
//
//   ||c|| = sum_k |c_k|^p
//   phi1  = sum_{j>=1,k>=0} m^p                        / ||c||
//   phi2  = sum_{j>=1,k>=0} M^(r p) / m^((r-1) p)      / ||c||   (both nonzero)
//   phi3  = sum_{j>=1,k>=0} m^p log(M / m)             / ||c||   (both nonzero)
//
// These feed the limits of the normalised block variances of the tail array
// sums behind the two estimating equations, and through them the 2x2 matrix
// Sigma of the estimating functions and the estimator covariance L Sigma L^T.

#ifndef TAILPROC_ASYMPTOTICS_HPP_
#define TAILPROC_ASYMPTOTICS_HPP_

#include <Eigen/Core>
#include <Eigen/LU>
#include <span>

#include "tailproc/process.hpp"

namespace tailproc {

using Matrix2 = Eigen::Matrix2d;

struct PhiConstants {
  double norm_c = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  double gamma = 0.0;
  double r = 0.0;
  /// Bound on the error of each phi caused by coefficient truncation.
  double truncation_error = 0.0;
};

/// sum_k |c_k|^(1/gamma) over the stored support. `truncation_error`, when
/// non-null, receives the bound on the omitted tail.
double norm_c(const CoefficientSequence& coeffs, double gamma, double* truncation_error = nullptr);
double norm_c(std::span<const double> coeffs, double gamma);

PhiConstants phi_constants(const CoefficientSequence& coeffs, double gamma, double r);
PhiConstants phi_constants(std::span<const double> coeffs, double gamma, double r);

/// The six raw limits of the block (co)variances divided by k, plus the
/// centring constants of the two tail functionals.
struct RawLimits {
  double t1 = 0.0;   // variance, log-excess functional
  double t2 = 0.0;   // variance, power functional
  double tI = 0.0;   // variance, exceedance indicator
  double t12 = 0.0;
  double t1I = 0.0;
  double t2I = 0.0;
  double beta1p = 0.0;  // gamma / (gamma + 1)
  double beta2p = 0.0;  // -r / (1 - r + gamma)
  double beta1 = 0.0;   // gamma
  double beta2 = 0.0;   // -r / (1 - r)
};

RawLimits raw_limits(double gamma, double r, const PhiConstants& phi);

struct Kappas {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
};

/// Limits of the centred block variances and covariance, in closed form.
Kappas kappas(double gamma, double r, const PhiConstants& phi);

/// [[kappa1, -kappa3], [-kappa3, kappa2]].
Matrix2 sigma_matrix(const Kappas& k);

/// Inverse of minus the probability limit of the Jacobian of the estimating
/// equations, as a closed form.
Matrix2 l_matrix(double gamma, double r);

/// Probability limit of the Jacobian of the estimating equations in
/// (gamma, sigma / sigma(n/k)). l_matrix() == -jacobian_limit()^-1.
Matrix2 jacobian_limit(double gamma, double r);

struct CovarianceReport {
  PhiConstants phi;
  RawLimits raw;
  Kappas kappa;
  Matrix2 sigma_matrix;
  Matrix2 l_matrix;
  Matrix2 estimator_cov;
  bool sigma_psd = false;
  bool estimator_cov_psd = false;
};

/// Limit covariance of sqrt(k) (gamma_hat - gamma, sigma_hat / sigma(n/k) - 1).
CovarianceReport estimator_cov(double gamma, double r, const CoefficientSequence& coeffs);

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
Eigen::Vector2d symmetric_eigenvalues(const Matrix2& m);

/// Symmetric with both eigenvalues >= -tol * max(1, |largest|).
bool is_symmetric_psd(const Matrix2& m, double tol = 1e-12);

}  // namespace tailproc

#endif  // TAILPROC_ASYMPTOTICS_HPP_
