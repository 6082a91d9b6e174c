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

// Reference computations used to check the library. Each one takes a route
// that does not share code with the implementation under test.

#ifndef TAILPROC_TESTS_ORACLES_HPP_
#define TAILPROC_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Phi {
  double norm;
  double phi1;
  double phi2;
  double phi3;
};

// Enumerates every unordered index pair i < j of the support directly.
inline Phi brute_force_phi(const std::vector<double>& c, double gamma, double r) {
  Phi out{0.0, 0.0, 0.0, 0.0};
  for (double v : c) out.norm += std::pow(std::fabs(v), 1.0 / gamma);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const double lo = std::min(std::fabs(c[i]), std::fabs(c[j]));
      const double hi = std::max(std::fabs(c[i]), std::fabs(c[j]));
      out.phi1 += std::pow(lo, 1.0 / gamma);
      if (lo > 0.0) {
        out.phi2 += std::pow(hi, r / gamma) / std::pow(lo, (r - 1.0) / gamma);
        out.phi3 += std::pow(lo, 1.0 / gamma) * std::log(hi / lo);
      }
    }
  }
  out.phi1 /= out.norm;
  out.phi2 /= out.norm;
  out.phi3 /= out.norm;
  return out;
}

// P(c0 Z0 + c1 Z1 > t) for iid Pareto(alpha) on [1, inf), by conditioning on
// Z1 and integrating the exact conditional tail against its density.
inline double two_term_tail(double t, double c0, double c1, double alpha) {
  const double z_max = (t - c0) / c1;  // beyond this Z0 >= 1 always exceeds
  if (z_max <= 1.0) return 1.0;
  auto integrand = [&](double z) {
    const double s = (t - c1 * z) / c0;
    const double cond = s <= 1.0 ? 1.0 : std::pow(s, -alpha);
    return cond * alpha * std::pow(z, -alpha - 1.0);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  // Geometric panels resolve the z^(-alpha-1) peak at 1 and the kink near z_max.
  std::vector<double> knots{1.0};
  for (double x = 2.0; x < 0.5 * z_max; x *= 2.0) knots.push_back(x);
  for (double gap = 0.5 * z_max; gap > 1e-3; gap *= 0.5) knots.push_back(z_max - gap);
  knots.push_back(z_max);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] <= knots[i]) continue;
    total += Quad::integrate(integrand, knots[i], knots[i + 1], 8, 1e-13);
  }
  return total + std::pow(z_max, -alpha);
}

// Scans a log grid of b for the sign change of the moment residual, then
// refines with TOMS 748. Returns {gamma, sigma, b}.
inline std::array<double, 3> lme_by_grid(const std::vector<double>& y, double r) {
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  auto gamma_of = [&](double b) {
    double s = 0.0;
    for (double v : y) s += std::log(1.0 + b * v);
    return s / static_cast<double>(y.size());
  };
  auto residual = [&](double b) {
    const double g = gamma_of(b);
    double s = 0.0;
    for (double v : y) s += std::pow(1.0 + b * v, r / g);
    return s / static_cast<double>(y.size()) - 1.0 / (1.0 - r);
  };
  constexpr int kPoints = 1600;
  double prev_b = 1e-8 / mean;
  double prev_g = residual(prev_b);
  for (int i = 1; i <= kPoints; ++i) {
    const double b = 1e-8 / mean * std::pow(10.0, 16.0 * i / kPoints);
    const double g = residual(b);
    if ((prev_g > 0.0) != (g > 0.0)) {
      std::uintmax_t iters = 200;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          residual, prev_b, b, prev_g, g, boost::math::tools::eps_tolerance<double>(50), iters);
      const double root = 0.5 * (lo + hi);
      const double gamma = gamma_of(root);
      return {gamma, gamma / root, root};
    }
    prev_b = b;
    prev_g = g;
  }
  throw std::runtime_error("oracle: no sign change");
}

// Solves ct1 b^-a + ct2 b^-(a+1) + ct3 b^-(a+2) = 1/x for b.
inline double invert_three_term_tail(const std::array<double, 3>& ct, double alpha, double x) {
  auto f = [&](double b) {
    return ct[0] * std::pow(b, -alpha) + ct[1] * std::pow(b, -alpha - 1.0) +
           ct[2] * std::pow(b, -alpha - 2.0) - 1.0 / x;
  };
  const double guess = std::pow(ct[0] * x, 1.0 / alpha);
  std::uintmax_t iters = 300;
  const auto [lo, hi] = boost::math::tools::bisect(
      f, 0.5 * guess, 2.0 * guess, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (lo + hi);
}

// P(Bin(trials, p) >= successes).
inline double binomial_upper_tail(unsigned trials, unsigned successes, double p) {
  if (successes == 0) return 1.0;
  boost::math::binomial_distribution<double> dist(trials, p);
  return boost::math::cdf(boost::math::complement(dist, successes - 1));
}

// Kolmogorov limit tail by the alternating series only.
inline double kolmogorov_tail(double lambda) {
  double s = 0.0;
  for (int j = 1; j < 200; ++j) {
    s += (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
  }
  return 2.0 * s;
}

// N(0, v) pairs through the Cholesky factor of v.
template <class Matrix>
std::vector<std::array<double, 2>> gaussian_pairs(const Matrix& v, std::size_t count,
                                                  std::uint64_t seed) {
  const double l00 = std::sqrt(v(0, 0));
  const double l10 = v(1, 0) / l00;
  const double l11 = std::sqrt(v(1, 1) - l10 * l10);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<std::array<double, 2>> out(count);
  for (auto& p : out) {
    const double a = normal(gen);
    const double b = normal(gen);
    p = {l00 * a, l10 * a + l11 * b};
  }
  return out;
}

}  // namespace oracle

#endif  // TAILPROC_TESTS_ORACLES_HPP_
