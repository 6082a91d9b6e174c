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

// Heavy-tailed innovation laws, moving-average coefficient sequences and
// simulation of the stationary linear process X_t = sum_j c_j Z_{t-j}.

#ifndef TAILPROC_PROCESS_HPP_
#define TAILPROC_PROCESS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailproc/rng.hpp"

namespace tailproc {

enum class InnovationKind { one_sided_pareto, two_sided_pareto };

std::string to_string(InnovationKind kind);
InnovationKind innovation_kind_from_string(const std::string& name);

/// Pareto innovations with exact power tails (constant slowly varying part).
///
/// One-sided: P(Z > z) = z^-alpha on [1, inf). Two-sided: the sign is +1 with
/// probability pi1 and -1 with probability pi2, the magnitude is one-sided
/// Pareto(alpha). In both cases P(|Z| > z) = z^-alpha and gamma = 1/alpha.
class InnovationModel {
 public:
  static InnovationModel one_sided_pareto(double alpha);
  static InnovationModel two_sided_pareto(double alpha, double pi1 = 0.5, double pi2 = 0.5);

  InnovationKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double gamma() const { return 1.0 / alpha_; }
  double pi1() const { return pi1_; }
  double pi2() const { return pi2_; }

  /// Moments of |Z| of order strictly below alpha are finite.
  bool has_moment(double order) const { return order < alpha_; }

  /// Inverse transform of the magnitude: u in (0, 1] maps to u^(-1/alpha).
  double magnitude_from_uniform(double u) const { return std::pow(u, -1.0 / alpha_); }

  /// Inverse transform of a full draw. `u_sign` is ignored for the
  /// one-sided law; for the two-sided law u_sign < pi1 selects the right tail.
  double from_uniforms(double u_magnitude, double u_sign) const;

  /// Distribution function G_Z.
  double cdf(double z) const;

  template <class Engine>
  double draw(Engine& engine) const {
    if (kind_ == InnovationKind::one_sided_pareto) {
      return magnitude_from_uniform(engine.uniform_open_closed());
    }
    const double u_sign = engine.uniform();
    return from_uniforms(engine.uniform_open_closed(), u_sign);
  }

  bool operator==(const InnovationModel&) const = default;

 private:
  InnovationModel(InnovationKind kind, double alpha, double pi1, double pi2)
      : kind_(kind), alpha_(alpha), pi1_(pi1), pi2_(pi2) {}

  InnovationKind kind_;
  double alpha_;
  double pi1_;
  double pi2_;
};

/// `count` iid draws from `model` using the stream keyed by `seed`.
std::vector<double> innovation_sample(const InnovationModel& model, std::size_t count,
                                      std::uint64_t seed);

struct InnovationMoments {
  double mean;
  double variance;
};

/// Mean and variance of one-sided Pareto(alpha), alpha > 2.
InnovationMoments innovation_moments(const InnovationModel& model);

/// |c_j| < scale * ratio^-j.
struct DecayCertificate {
  double scale;
  double ratio;
};

struct ArmaSpec {
  std::vector<double> ar;
  std::vector<double> ma;
};

/// The coefficients (c_0, ..., c_J) of a linear process.
///
/// Either given explicitly (an exact finite moving average) or obtained as a
/// truncation of the causal MA(inf) expansion of an ARMA model. For the
/// latter the discarded tail is bounded geometrically: for every j > J,
/// |c_j| <= tail_scale * tail_ratio^(j - J - 1), and
/// sum_{j>J} |c_j| <= truncation_error_bound().
class CoefficientSequence {
 public:
  /// Throws std::invalid_argument("degenerate coefficients") when empty or
  /// all zero, or when any coefficient is not finite.
  static CoefficientSequence explicit_coefficients(std::vector<double> coeffs);

  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  /// Index J of the last stored coefficient.
  std::size_t order() const { return coeffs_.size() - 1; }
  double operator[](std::size_t j) const { return coeffs_[j]; }

  bool is_arma() const { return arma_.has_value(); }
  const std::optional<ArmaSpec>& arma() const { return arma_; }

  double truncation_error_bound() const { return truncation_error_; }
  double tail_scale() const { return tail_scale_; }
  double tail_ratio() const { return tail_ratio_; }

  /// Upper bound on sum_{j>J} |c_j|^power from the geometric tail envelope.
  double tail_power_sum_bound(double power) const;

  /// Smallest AR root modulus, when the sequence came from an ARMA model
  /// with an autoregressive part.
  std::optional<double> ar_root_modulus() const { return ar_root_modulus_; }

  /// Every coefficient multiplied by `lambda`; the certificates scale along.
  CoefficientSequence scaled(double lambda) const;

  bool all_nonnegative() const;

 private:
  friend CoefficientSequence arma_to_ma(std::span<const double>, std::span<const double>, double);

  explicit CoefficientSequence(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  std::vector<double> coeffs_;
  std::optional<ArmaSpec> arma_;
  std::optional<double> ar_root_modulus_;
  double truncation_error_ = 0.0;
  double tail_scale_ = 0.0;
  double tail_ratio_ = 0.0;
};

inline constexpr double kDefaultTruncationTolerance = 1e-12;

/// MA(inf) expansion of the causal ARMA model
///   X_t - ar_1 X_{t-1} - ... - ar_p X_{t-p} = Z_t + ma_1 Z_{t-1} + ... + ma_q Z_{t-q},
/// truncated at the smallest J whose certified tail bound is below `tol`.
///
/// The tail bound comes from the companion recursion: once ||F^m||_inf <= q < 1
/// for the companion matrix F, the tail is at most the sum of the next m state
/// norms divided by (1 - q).
///
/// Throws std::invalid_argument("not causal") if the AR polynomial has a root
/// of modulus <= 1, and std::invalid_argument for tol <= 0.
CoefficientSequence arma_to_ma(std::span<const double> ar, std::span<const double> ma,
                               double tol = kDefaultTruncationTolerance);

/// A pair (A, u), u > 1, with |c_j| < A u^-j for every stored j. u is the
/// smallest AR root modulus for ARMA input with an AR part, 2 otherwise; A is
/// the smallest value making the inequality strict.
DecayCertificate verify_a3(const CoefficientSequence& coeffs);

/// sum_{j>=1} sum_{i>=0} (|c_i| min |c_{i+j}|)^(1/gamma)
///   * log((|c_i| max |c_{i+j}|) / (|c_i| min |c_{i+j}|)) over pairs with both
/// coefficients nonzero, by direct double summation over the stored support.
double a4_sum(const CoefficientSequence& coeffs, double gamma);

/// Applies the finite filter to an innovation block. `innovations` holds
/// Z_{1-J}, ..., Z_n; the result holds X_1, ..., X_n with
/// X_t = sum_{j=0}^{J} c_j Z_{t-j}.
std::vector<double> apply_filter(std::span<const double> coeffs,
                                 std::span<const double> innovations);

struct SimulatedPath {
  std::vector<double> values;
  std::uint64_t seed;
  std::uint64_t config_fingerprint;
};

/// FNV-1a hash over (coefficients, model, n).
std::uint64_t config_fingerprint(const CoefficientSequence& coeffs, const InnovationModel& model,
                                 std::size_t n);

/// Draws n + J innovations from the stream keyed by `seed` and filters them.
/// Identical arguments give a bit-identical path.
SimulatedPath simulate(const CoefficientSequence& coeffs, const InnovationModel& model,
                       std::size_t n, std::uint64_t seed);

/// Same as simulate() but draws from a caller-supplied engine into `out`,
/// reusing the buffers. Used by the Monte Carlo harness.
void simulate_into(const CoefficientSequence& coeffs, const InnovationModel& model,
                   std::size_t n, Xoshiro256& engine, std::vector<double>& innovations,
                   std::vector<double>& out);

}  // namespace tailproc

#endif  // TAILPROC_PROCESS_HPP_
