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

// Monte Carlo check of the joint normal limit of the standardized LME pair
//   z = sqrt(k) (gamma_hat - gamma, sigma_hat / sigma(n/k) - 1)
// against N(0, L Sigma L^T). Replication i draws from its own stream
// (master_seed, i), so the report depends only on the configuration.

#ifndef TAILPROC_MONTECARLO_HPP_
#define TAILPROC_MONTECARLO_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailproc/asymptotics.hpp"
#include "tailproc/process.hpp"
#include "tailproc/second_order.hpp"

namespace tailproc {

enum class SamplingMode {
  /// Simulate the series and take the top-k excesses.
  linear_process,
  /// Draw k iid GPD(gamma, sigma(n/k)) excesses directly.
  direct_gpd,
};

std::string to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string& name);

struct ExperimentConfig {
  CoefficientSequence coeffs = CoefficientSequence::explicit_coefficients({1.0});
  InnovationModel model = InnovationModel::one_sided_pareto(3.0);
  std::size_t n = 1'000'000;
  /// Explicit k; when empty the k(n) rule with `theta` is used.
  std::optional<std::size_t> k;
  double theta = kDefaultTheta;
  double r = -0.5;
  std::size_t replications = 1000;
  std::uint64_t master_seed = 20260101;
  std::size_t workers = 1;
  SamplingMode mode = SamplingMode::linear_process;
};

enum class SolverStatus { ok, no_solution, not_converged, invalid_sample };

std::string to_string(SolverStatus status);

struct ReplicationRecord {
  std::size_t index = 0;
  double gamma_hat = 0.0;
  double sigma_hat = 0.0;
  /// sqrt(k) (gamma_hat - gamma).
  double z1 = 0.0;
  /// sqrt(k) (sigma_hat / sigma(n/k) - 1).
  double z2 = 0.0;
  SolverStatus status = SolverStatus::ok;
};

/// gamma * b(n/k) with b from the three-term quantile expansion.
/// Throws std::invalid_argument("sigma(n/k) unavailable; supply quantile
/// expansion") when `expansion` is empty.
double sigma_nk(const std::optional<QuantileExpansion>& expansion, double gamma, std::size_t n,
                std::size_t k);

/// Per-coordinate and Mahalanobis Kolmogorov-Smirnov diagnostics.
struct NormalityDiagnostics {
  std::array<double, 2> ks_distance{};
  std::array<double, 2> ks_p_value{};
  double mahalanobis_ks_distance = 0.0;
  double mahalanobis_p_value = 0.0;
};

/// Unbiased sample covariance. Throws std::invalid_argument with fewer than
/// two pairs.
Matrix2 empirical_cov(std::span<const Eigen::Vector2d> pairs);
Matrix2 empirical_cov(std::span<const ReplicationRecord> records);

/// V^(-1/2) for symmetric positive definite V. Throws std::invalid_argument
/// when V is singular, not symmetric, or has a non-positive diagonal.
Matrix2 inverse_sqrt(const Matrix2& v);

/// sup |F_n - F| for a sample against a continuous distribution function.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf);

/// Asymptotic Kolmogorov tail P(K > sqrt(m) d).
double kolmogorov_p_value(double distance, std::size_t m);

double standard_normal_cdf(double x);

/// Requires at least 50 pairs.
NormalityDiagnostics normality_diagnostics(std::span<const Eigen::Vector2d> pairs,
                                           const Matrix2& theoretical);
NormalityDiagnostics normality_diagnostics(std::span<const ReplicationRecord> records,
                                           const Matrix2& theoretical);

inline constexpr std::size_t kMinDiagnosticRecords = 50;
inline constexpr double kUnreliableFailureShare = 0.05;

struct ValidationReport {
  std::size_t n = 0;
  std::size_t k = 0;
  double gamma = 0.0;
  double r = 0.0;
  double sigma_nk = 0.0;
  std::size_t replications = 0;
  std::size_t failure_count = 0;
  std::array<double, 2> empirical_mean{};
  std::optional<Matrix2> empirical_cov;
  Matrix2 theoretical_cov = Matrix2::Zero();
  /// (empirical - theoretical) / |theoretical|, entrywise.
  std::optional<Matrix2> relative_deviation;
  std::optional<NormalityDiagnostics> normality;
  std::optional<SecondOrderRates> second_order_rates;
  std::vector<std::string> flags;
  double elapsed_seconds = 0.0;
  std::vector<ReplicationRecord> records;

  bool has_flag(const std::string& flag) const;
};

/// A validated configuration with the derived constants resolved once.
class Experiment {
 public:
  /// Throws std::invalid_argument when k + 1 > n, M = 0, r >= 0, or the
  /// quantile expansion is unavailable for the model.
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  std::size_t k() const { return k_; }
  double gamma() const { return gamma_; }
  double sigma_nk() const { return sigma_nk_; }
  const QuantileExpansion& expansion() const { return expansion_; }
  const Matrix2& theoretical_cov() const { return theoretical_cov_; }

  /// Deterministic in (config, index). Solver failures land in `status`.
  ReplicationRecord run_replication(std::size_t index) const;

  /// Runs every replication on `workers` threads and summarizes.
  ValidationReport run() const;

  /// Aggregates records in index order, whatever order they arrive in.
  ValidationReport summarize(std::vector<ReplicationRecord> records) const;

 private:
  ReplicationRecord standardize(std::size_t index, std::span<const double> excesses) const;

  ExperimentConfig config_;
  std::size_t k_ = 0;
  double gamma_ = 0.0;
  double sigma_nk_ = 0.0;
  QuantileExpansion expansion_;
  Matrix2 theoretical_cov_ = Matrix2::Zero();
};

ReplicationRecord run_replication(const ExperimentConfig& config, std::size_t index);
ValidationReport run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------

template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double m = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f});
  }
  return d;
}

}  // namespace tailproc

#endif  // TAILPROC_MONTECARLO_HPP_
