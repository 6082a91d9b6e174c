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

#include "tailproc/montecarlo.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "tailproc/errors.hpp"
#include "tailproc/estimator.hpp"

namespace tailproc {

namespace {

std::vector<Eigen::Vector2d> successful_pairs(std::span<const ReplicationRecord> records) {
  std::vector<Eigen::Vector2d> pairs;
  pairs.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.status == SolverStatus::ok) pairs.emplace_back(rec.z1, rec.z2);
  }
  return pairs;
}

}  // namespace

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::linear_process ? "linear_process" : "direct_gpd";
}

SamplingMode sampling_mode_from_string(const std::string& name) {
  if (name == "linear_process") return SamplingMode::linear_process;
  if (name == "direct_gpd") return SamplingMode::direct_gpd;
  throw std::invalid_argument("unknown sampling mode: " + name);
}

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::ok:
      return "ok";
    case SolverStatus::no_solution:
      return "no_solution";
    case SolverStatus::not_converged:
      return "not_converged";
    case SolverStatus::invalid_sample:
      return "invalid_sample";
  }
  return "unknown";
}

double sigma_nk(const std::optional<QuantileExpansion>& expansion, double gamma, std::size_t n,
                std::size_t k) {
  if (!expansion) throw std::invalid_argument("sigma(n/k) unavailable; supply quantile expansion");
  if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
  return gamma * expansion->quantile(static_cast<double>(n) / static_cast<double>(k));
}

Matrix2 empirical_cov(std::span<const Eigen::Vector2d> pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("empirical covariance needs at least 2 records");
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pairs) mean += p;
  mean /= static_cast<double>(pairs.size());
  Matrix2 cov = Matrix2::Zero();
  for (const auto& p : pairs) {
    const Eigen::Vector2d d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(pairs.size() - 1);
  cov(1, 0) = cov(0, 1);
  return cov;
}

Matrix2 empirical_cov(std::span<const ReplicationRecord> records) {
  const auto pairs = successful_pairs(records);
  return empirical_cov(std::span<const Eigen::Vector2d>(pairs));
}

Matrix2 inverse_sqrt(const Matrix2& v) {
  if (!v.allFinite()) throw std::invalid_argument("theoretical covariance is not finite");
  if (std::abs(v(0, 1) - v(1, 0)) > 1e-12 * v.cwiseAbs().maxCoeff()) {
    throw std::invalid_argument("theoretical covariance is not symmetric");
  }
  if (!(v(0, 0) > 0.0) || !(v(1, 1) > 0.0)) {
    throw std::invalid_argument("theoretical covariance needs a positive diagonal");
  }
  Eigen::SelfAdjointEigenSolver<Matrix2> solver(v);
  const Eigen::Vector2d ev = solver.eigenvalues();
  if (!(ev(0) > 1e-12 * ev(1))) throw std::invalid_argument("singular theoretical covariance");
  const Eigen::Vector2d scale = ev.cwiseSqrt().cwiseInverse();
  return solver.eigenvectors() * scale.asDiagonal() * solver.eigenvectors().transpose();
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_p_value(double distance, std::size_t m) {
  const double lambda = std::sqrt(static_cast<double>(m)) * distance;
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series for P(K <= lambda); fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double odd = 2.0 * j - 1.0;
      sum += std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

NormalityDiagnostics normality_diagnostics(std::span<const Eigen::Vector2d> pairs,
                                           const Matrix2& theoretical) {
  if (pairs.size() < kMinDiagnosticRecords) {
    throw std::invalid_argument("normality diagnostics need at least 50 records");
  }
  const Matrix2 whiten = inverse_sqrt(theoretical);
  std::vector<double> first(pairs.size());
  std::vector<double> second(pairs.size());
  std::vector<double> squared(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Eigen::Vector2d w = whiten * pairs[i];
    first[i] = w(0);
    second[i] = w(1);
    squared[i] = w.squaredNorm();
  }
  NormalityDiagnostics out;
  const std::size_t m = pairs.size();
  out.ks_distance[0] = ks_distance(std::move(first), standard_normal_cdf);
  out.ks_distance[1] = ks_distance(std::move(second), standard_normal_cdf);
  out.ks_p_value[0] = kolmogorov_p_value(out.ks_distance[0], m);
  out.ks_p_value[1] = kolmogorov_p_value(out.ks_distance[1], m);
  out.mahalanobis_ks_distance =
      ks_distance(std::move(squared), [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-0.5 * x); });
  out.mahalanobis_p_value = kolmogorov_p_value(out.mahalanobis_ks_distance, m);
  return out;
}

NormalityDiagnostics normality_diagnostics(std::span<const ReplicationRecord> records,
                                           const Matrix2& theoretical) {
  const auto pairs = successful_pairs(records);
  return normality_diagnostics(std::span<const Eigen::Vector2d>(pairs), theoretical);
}

bool ValidationReport::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  if (config_.replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (!(config_.r < 0.0) || !std::isfinite(config_.r)) {
    throw std::invalid_argument("r must be negative");
  }
  if (config_.n < 2) throw std::invalid_argument("n must be at least 2");
  std::optional<QuantileExpansion> expansion;
  if (config_.model.kind() == InnovationKind::one_sided_pareto && config_.model.alpha() > 2.0 &&
      config_.coeffs.all_nonnegative()) {
    expansion = quantile_expansion(tail_expansion(config_.model.alpha(), config_.coeffs));
  }
  gamma_ = config_.model.gamma();
  if (config_.k) {
    k_ = *config_.k;
  } else {
    if (!expansion) throw std::invalid_argument("sigma(n/k) unavailable; supply quantile expansion");
    k_ = choose_k(config_.n, config_.theta, config_.model.alpha(), expansion->case_c2_zero);
  }
  if (k_ < 2) throw std::invalid_argument("k must be at least 2");
  if (k_ + 1 > config_.n) throw std::invalid_argument("k too large: need k + 1 <= n");
  sigma_nk_ = tailproc::sigma_nk(expansion, gamma_, config_.n, k_);
  expansion_ = *expansion;
  theoretical_cov_ = estimator_cov(gamma_, config_.r, config_.coeffs).estimator_cov;
}

ReplicationRecord Experiment::standardize(std::size_t index,
                                          std::span<const double> excesses) const {
  ReplicationRecord rec;
  rec.index = index;
  try {
    const LmeEstimate est = lme_fit(excesses, config_.r);
    const double root_k = std::sqrt(static_cast<double>(k_));
    rec.gamma_hat = est.gamma_hat;
    rec.sigma_hat = est.sigma_hat;
    rec.z1 = root_k * (est.gamma_hat - gamma_);
    rec.z2 = root_k * (est.sigma_hat / sigma_nk_ - 1.0);
    rec.status = std::isfinite(rec.z1) && std::isfinite(rec.z2) ? SolverStatus::ok
                                                                 : SolverStatus::not_converged;
  } catch (const NumericalError& e) {
    rec.status = std::string(e.what()) == "no LME solution found" ? SolverStatus::no_solution
                                                                  : SolverStatus::not_converged;
  } catch (const std::invalid_argument&) {
    rec.status = SolverStatus::invalid_sample;
  }
  if (rec.status != SolverStatus::ok) {
    rec.gamma_hat = rec.sigma_hat = rec.z1 = rec.z2 = std::nan("");
  }
  return rec;
}

namespace {

// Buffers reused across the replications handled by one worker.
struct Workspace {
  std::vector<double> innovations;
  std::vector<double> path;
  std::vector<double> excesses;
};

}  // namespace

ReplicationRecord Experiment::run_replication(std::size_t index) const {
  Xoshiro256 engine = Xoshiro256::for_stream(config_.master_seed, index);
  if (config_.mode == SamplingMode::direct_gpd) {
    std::vector<double> excesses(k_);
    for (auto& y : excesses) {
      y = sigma_nk_ * std::expm1(-gamma_ * std::log(engine.uniform_open_closed())) / gamma_;
    }
    return standardize(index, excesses);
  }
  thread_local Workspace ws;
  simulate_into(config_.coeffs, config_.model, config_.n, engine, ws.innovations, ws.path);
  const ExcessSample sample = top_k_excesses(ws.path, k_);
  return standardize(index, sample.excesses);
}

ValidationReport Experiment::run() const {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t total = config_.replications;
  std::vector<ReplicationRecord> records(total);
  const std::size_t workers = std::clamp<std::size_t>(config_.workers, 1, total);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      records[i] = run_replication(i);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ValidationReport report = summarize(std::move(records));
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ValidationReport Experiment::summarize(std::vector<ReplicationRecord> records) const {
  std::sort(records.begin(), records.end(),
            [](const ReplicationRecord& a, const ReplicationRecord& b) { return a.index < b.index; });
  ValidationReport report;
  report.n = config_.n;
  report.k = k_;
  report.gamma = gamma_;
  report.r = config_.r;
  report.sigma_nk = sigma_nk_;
  report.replications = records.size();
  report.theoretical_cov = theoretical_cov_;
  report.second_order_rates = second_order_rates(config_.n, k_, expansion_);

  const auto pairs = successful_pairs(records);
  report.failure_count = records.size() - pairs.size();
  if (!records.empty() &&
      static_cast<double>(report.failure_count) >
          kUnreliableFailureShare * static_cast<double>(records.size())) {
    report.flags.emplace_back("unreliable");
  }

  if (!pairs.empty()) {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : pairs) mean += p;
    mean /= static_cast<double>(pairs.size());
    report.empirical_mean = {mean(0), mean(1)};
  } else {
    report.empirical_mean = {std::nan(""), std::nan("")};
  }

  if (pairs.size() < 2) {
    report.flags.emplace_back("insufficient replications");
  } else {
    const Matrix2 cov = empirical_cov(std::span<const Eigen::Vector2d>(pairs));
    report.empirical_cov = cov;
    report.relative_deviation =
        ((cov - theoretical_cov_).array() / theoretical_cov_.array().abs()).matrix();
  }

  if (pairs.size() >= kMinDiagnosticRecords) {
    try {
      report.normality = normality_diagnostics(std::span<const Eigen::Vector2d>(pairs), theoretical_cov_);
    } catch (const std::invalid_argument&) {
      report.flags.emplace_back("singular theoretical covariance");
    }
  } else if (!report.has_flag("insufficient replications")) {
    report.flags.emplace_back("too few replications for normality diagnostics");
  }

  report.records = std::move(records);
  return report;
}

ReplicationRecord run_replication(const ExperimentConfig& config, std::size_t index) {
  return Experiment(config).run_replication(index);
}

ValidationReport run_experiment(const ExperimentConfig& config) { return Experiment(config).run(); }

}  // namespace tailproc
