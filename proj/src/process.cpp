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

#include "tailproc/process.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailproc/errors.hpp"

namespace tailproc {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

std::vector<double> trim_trailing_zeros(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  while (!out.empty() && out.back() == 0.0) out.pop_back();
  return out;
}

class Fnv1a {
 public:
  void add_bytes(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= bytes[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) { add_bytes(&v, sizeof v); }
  void add(std::uint64_t v) { add_bytes(&v, sizeof v); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string to_string(InnovationKind kind) {
  return kind == InnovationKind::one_sided_pareto ? "one_sided_pareto" : "two_sided_pareto";
}

InnovationKind innovation_kind_from_string(const std::string& name) {
  if (name == "one_sided_pareto") return InnovationKind::one_sided_pareto;
  if (name == "two_sided_pareto") return InnovationKind::two_sided_pareto;
  throw std::invalid_argument("unknown innovation model '" + name + "'");
}

InnovationModel InnovationModel::one_sided_pareto(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("tail index alpha must be positive");
  }
  return InnovationModel(InnovationKind::one_sided_pareto, alpha, 1.0, 0.0);
}

InnovationModel InnovationModel::two_sided_pareto(double alpha, double pi1, double pi2) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("tail index alpha must be positive");
  }
  if (!(pi1 >= 0.0) || !(pi2 >= 0.0) || std::abs(pi1 + pi2 - 1.0) > 1e-12) {
    throw std::invalid_argument("tail weights must be non-negative and sum to one");
  }
  return InnovationModel(InnovationKind::two_sided_pareto, alpha, pi1, pi2);
}

double InnovationModel::from_uniforms(double u_magnitude, double u_sign) const {
  const double magnitude = magnitude_from_uniform(u_magnitude);
  if (kind_ == InnovationKind::one_sided_pareto) return magnitude;
  return u_sign < pi1_ ? magnitude : -magnitude;
}

double InnovationModel::cdf(double z) const {
  if (kind_ == InnovationKind::one_sided_pareto) {
    return z < 1.0 ? 0.0 : -std::expm1(-alpha_ * std::log(z));
  }
  if (z >= 1.0) return 1.0 - pi1_ * std::pow(z, -alpha_);
  if (z <= -1.0) return pi2_ * std::pow(-z, -alpha_);
  return pi2_;
}

std::vector<double> innovation_sample(const InnovationModel& model, std::size_t count,
                                      std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("count must be at least 1");
  Xoshiro256 engine(seed);
  std::vector<double> out(count);
  for (auto& z : out) z = model.draw(engine);
  return out;
}

InnovationMoments innovation_moments(const InnovationModel& model) {
  if (model.kind() != InnovationKind::one_sided_pareto) {
    throw std::invalid_argument("unsupported model: moments require the one-sided Pareto law");
  }
  const double a = model.alpha();
  if (!(a > 2.0)) throw std::domain_error("moment does not exist");
  return {a / (a - 1.0), a / ((a - 1.0) * (a - 2.0))};
}

CoefficientSequence CoefficientSequence::explicit_coefficients(std::vector<double> coeffs) {
  require_finite(coeffs, "coefficients");
  if (std::none_of(coeffs.begin(), coeffs.end(), [](double c) { return c != 0.0; })) {
    throw std::invalid_argument("degenerate coefficients");
  }
  return CoefficientSequence(std::move(coeffs));
}

double CoefficientSequence::tail_power_sum_bound(double power) const {
  if (tail_scale_ == 0.0) return 0.0;
  return std::pow(tail_scale_, power) / (1.0 - std::pow(tail_ratio_, power));
}

CoefficientSequence CoefficientSequence::scaled(double lambda) const {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw std::invalid_argument("degenerate coefficients");
  }
  CoefficientSequence out = *this;
  for (auto& c : out.coeffs_) c *= lambda;
  out.truncation_error_ *= std::abs(lambda);
  out.tail_scale_ *= std::abs(lambda);
  return out;
}

bool CoefficientSequence::all_nonnegative() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c >= 0.0; });
}

CoefficientSequence arma_to_ma(std::span<const double> ar_in, std::span<const double> ma_in,
                               double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
  require_finite(ar_in, "AR coefficients");
  require_finite(ma_in, "MA coefficients");
  const std::vector<double> ar = trim_trailing_zeros(ar_in);
  const std::vector<double> ma = trim_trailing_zeros(ma_in);
  const std::size_t p = ar.size();
  const std::size_t q = ma.size();

  if (p == 0) {
    std::vector<double> coeffs{1.0};
    coeffs.insert(coeffs.end(), ma.begin(), ma.end());
    CoefficientSequence out(std::move(coeffs));
    out.arma_ = ArmaSpec{{}, ma};
    return out;
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < p; ++i) companion(0, i) = ar[i];
  for (std::size_t i = 1; i < p; ++i) companion(i, i - 1) = 1.0;

  const Eigen::VectorXcd eigenvalues = companion.eigenvalues();
  const double spectral_radius = eigenvalues.cwiseAbs().maxCoeff();
  if (spectral_radius >= 1.0 - 1e-12) throw std::invalid_argument("not causal");

  // Smallest m with ||F^m||_inf <= 1/2 (or, failing that, < 1).
  constexpr std::size_t kMaxPower = 200000;
  Eigen::MatrixXd power = companion;
  std::size_t m = 1;
  double contraction = power.cwiseAbs().rowwise().sum().maxCoeff();
  while (contraction > 0.5 && m < kMaxPower) {
    power = power * companion;
    ++m;
    contraction = power.cwiseAbs().rowwise().sum().maxCoeff();
  }
  if (!(contraction < 1.0)) {
    throw NumericalError("could not certify geometric decay of the MA expansion");
  }

  std::vector<double> c{1.0};
  auto coefficient = [&](std::size_t j) {
    while (c.size() <= j) {
      const std::size_t idx = c.size();
      double value = idx <= q ? ma[idx - 1] : 0.0;
      for (std::size_t i = 1; i <= std::min(idx, p); ++i) value += ar[i - 1] * c[idx - i];
      c.push_back(value);
    }
    return c[j];
  };
  // ||s_j||_inf with s_j = (c_j, ..., c_{j-p+1}).
  auto state_norm = [&](std::size_t j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < p && i <= j; ++i) norm = std::max(norm, std::abs(coefficient(j - i)));
    return norm;
  };
  auto tail_bound = [&](std::size_t last) {
    double sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) sum += state_norm(last + 1 + t);
    return sum / (1.0 - contraction);
  };

  constexpr std::size_t kMaxOrder = 50'000'000;
  std::size_t last = std::max(p, q);
  double bound = tail_bound(last);
  while (!(bound < tol)) {
    ++last;
    if (last > kMaxOrder) throw NumericalError("MA expansion did not reach the tolerance");
    bound = tail_bound(last);
  }

  double envelope = 0.0;
  for (std::size_t t = 0; t < m; ++t) envelope = std::max(envelope, state_norm(last + 1 + t));
  const double ratio = std::pow(contraction, 1.0 / static_cast<double>(m));

  c.resize(last + 1);
  CoefficientSequence out(std::move(c));
  out.arma_ = ArmaSpec{ar, ma};
  out.ar_root_modulus_ = 1.0 / spectral_radius;
  out.truncation_error_ = bound;
  out.tail_ratio_ = ratio;
  out.tail_scale_ = envelope / std::pow(ratio, static_cast<double>(m - 1));
  return out;
}

DecayCertificate verify_a3(const CoefficientSequence& coeffs) {
  const double ratio = coeffs.ar_root_modulus().value_or(2.0);
  double scale = 0.0;
  double weight = 1.0;
  for (double c : coeffs.coeffs()) {
    scale = std::max(scale, std::abs(c) * weight);
    weight *= ratio;
  }
  if (scale == 0.0) throw std::invalid_argument("degenerate coefficients");
  return {scale * (1.0 + 1e-12), ratio};
}

double a4_sum(const CoefficientSequence& coeffs, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const auto c = coeffs.coeffs();
  const double power = 1.0 / gamma;
  double sum = 0.0;
  for (std::size_t lag = 1; lag < c.size(); ++lag) {
    for (std::size_t i = 0; i + lag < c.size(); ++i) {
      const double a = std::abs(c[i]);
      const double b = std::abs(c[i + lag]);
      if (a == 0.0 || b == 0.0) continue;
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      sum += std::pow(lo, power) * std::log(hi / lo);
    }
  }
  return sum;
}

std::vector<double> apply_filter(std::span<const double> coeffs,
                                 std::span<const double> innovations) {
  if (coeffs.empty()) throw std::invalid_argument("degenerate coefficients");
  if (innovations.size() < coeffs.size()) {
    throw std::invalid_argument("need at least as many innovations as coefficients");
  }
  const std::size_t order = coeffs.size() - 1;
  std::vector<double> out(innovations.size() - order);
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double* z = innovations.data() + t + order;
    double x = 0.0;
    for (std::size_t j = 0; j <= order; ++j) x += coeffs[j] * z[-static_cast<std::ptrdiff_t>(j)];
    out[t] = x;
  }
  return out;
}

std::uint64_t config_fingerprint(const CoefficientSequence& coeffs, const InnovationModel& model,
                                 std::size_t n) {
  Fnv1a hash;
  hash.add(static_cast<std::uint64_t>(coeffs.size()));
  for (double c : coeffs.coeffs()) hash.add(c);
  hash.add(static_cast<std::uint64_t>(model.kind()));
  hash.add(model.alpha());
  hash.add(model.pi1());
  hash.add(model.pi2());
  hash.add(static_cast<std::uint64_t>(n));
  return hash.value();
}

void simulate_into(const CoefficientSequence& coeffs, const InnovationModel& model,
                   std::size_t n, Xoshiro256& engine, std::vector<double>& innovations,
                   std::vector<double>& out) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  const auto c = coeffs.coeffs();
  const std::size_t order = coeffs.order();
  innovations.resize(n + order);
  for (auto& z : innovations) z = model.draw(engine);
  out.resize(n);
  if (order == 0) {
    const double c0 = c[0];
    for (std::size_t t = 0; t < n; ++t) out[t] = c0 * innovations[t];
    return;
  }
  for (std::size_t t = 0; t < n; ++t) {
    const double* z = innovations.data() + t + order;
    double x = 0.0;
    for (std::size_t j = 0; j <= order; ++j) x += c[j] * z[-static_cast<std::ptrdiff_t>(j)];
    out[t] = x;
  }
}

SimulatedPath simulate(const CoefficientSequence& coeffs, const InnovationModel& model,
                       std::size_t n, std::uint64_t seed) {
  Xoshiro256 engine(seed);
  std::vector<double> innovations;
  SimulatedPath path{{}, seed, config_fingerprint(coeffs, model, n)};
  simulate_into(coeffs, model, n, engine, innovations, path.values);
  return path;
}

}  // namespace tailproc
