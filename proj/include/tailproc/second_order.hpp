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

// Asymptotic tail and quantile expansions for a linear process with
// non-negative coefficients driven by one-sided Pareto(alpha) innovations,
// alpha > 2, and the conditions under which the LME pair is asymptotically
// normal for that process.
//
// With C_u = sum_j c_j^u, mu = E Z and s2 = Var Z:
//   P(X > t) = ct1 t^-a + ct2 t^-(a+1) + ct3 t^-(a+2) + o(t^-(a+2))
//   ct1 = C_a
//   ct2 = a mu (C_1 C_a - C_{a+1})
//   ct3 = a (a+1) / 2 * [(C_2 C_a - C_{a+2}) s2 + (C_1^2 C_a - 2 C_1 C_{a+1} + C_{a+2}) mu^2]
// and the 1 - 1/x quantile is b(x) = a1 x^(1/a) + a2 + a3 x^(-1/a) + o(x^(-1/a)).

#ifndef TAILPROC_SECOND_ORDER_HPP_
#define TAILPROC_SECOND_ORDER_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tailproc/process.hpp"

namespace tailproc {

/// sum_j c_j^u. Throws std::invalid_argument when a coefficient is negative.
double c_sum(const CoefficientSequence& coeffs, double u);

struct TailExpansion {
  double alpha = 0.0;
  std::array<double, 3> c_tilde{};
  /// Coefficient of t^-(alpha+1) in the derivative of the tail: -alpha C_alpha.
  double density_leading = 0.0;

  /// ct1 t^-a + ct2 t^-(a+1) + ct3 t^-(a+2).
  double tail(double t) const;
};

/// Throws std::invalid_argument for alpha <= 2, negative coefficients, or no
/// positive coefficient.
TailExpansion tail_expansion(double alpha, const CoefficientSequence& coeffs);

struct QuantileExpansion {
  double alpha = 0.0;
  std::array<double, 3> a{};
  std::array<double, 3> c_tilde{};
  /// Second-order index of b in the extended sense: -2/alpha.
  double rho = 0.0;
  /// Second-order index of the tail: -1 when ct2 != 0, -2 otherwise.
  double rho_prime = 0.0;
  bool case_c2_zero = false;

  /// a1 x^(1/a) + a2 + a3 x^(-1/a).
  double quantile(double x) const;
  /// A(t) = 2 a3 t^(-2/a) / (a a1).
  double auxiliary(double t) const;
  /// A*(t) = -ct2 / (ct1 t) or, when ct2 = 0, -2 ct3 / (ct1 t^2).
  double auxiliary_tail(double t) const;
};

QuantileExpansion quantile_expansion(const TailExpansion& expansion);

struct SecondOrderRates {
  /// sqrt(k) |A(n/k)|.
  double rate_2erv = 0.0;
  /// sqrt(k) |A*(b(n/k))|.
  double rate_2rv = 0.0;
};

SecondOrderRates second_order_rates(std::size_t n, std::size_t k,
                                    const QuantileExpansion& expansion);

inline constexpr double kDefaultTheta = 0.9;
inline constexpr double kDefaultXi = 0.9;

/// Exponent of n in the k(n) rule: 2 theta / (2 + alpha) when ct2 != 0,
/// 4 theta / (4 + alpha) otherwise.
double k_rule_exponent(double theta, double alpha, bool case_c2_zero);

/// floor(n^exponent), clamped to [2, n - 1].
std::size_t choose_k(std::size_t n, double theta, double alpha, bool case_c2_zero);

struct ConditionItem {
  std::string name;
  bool passed = false;
  /// Numeric evidence; NaN when the item is structural.
  double value = 0.0;
  std::string note;
};

struct ConditionReport {
  double alpha = 0.0;
  double xi = 0.0;
  double eta = 0.0;
  double theta = 0.0;
  std::vector<ConditionItem> items;
  bool verdict = false;

  const ConditionItem* find(const std::string& name) const;
  std::vector<std::string> failing() const;
};

/// Relative test used for every "!= 0" condition: |value| > 1e-12 * scale,
/// where scale is the sum of absolute summands.
bool nonvanishing(double value, double scale);

ConditionReport check_conditions(double alpha, const CoefficientSequence& coeffs,
                                 double xi = kDefaultXi, double theta = kDefaultTheta);

/// t f(t) / (1 - F(t)) using the leading density term and the three-term tail.
double von_mises_ratio(double t, const TailExpansion& expansion);

}  // namespace tailproc

#endif  // TAILPROC_SECOND_ORDER_HPP_
