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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tailproc/errors.hpp"
#include "tailproc/estimator.hpp"
#include "tailproc/rng.hpp"

using namespace tailproc;

namespace {

std::vector<double> gpd_grid(double gamma, double sigma, std::size_t k) {
  std::vector<double> y(k);
  for (std::size_t i = 0; i < k; ++i) {
    y[i] = gpd_quantile({gamma, sigma}, (static_cast<double>(i) + 0.5) / static_cast<double>(k));
  }
  return y;
}

std::vector<double> gpd_draws(double gamma, double sigma, std::size_t k, std::uint64_t seed) {
  Xoshiro256 engine(seed);
  std::vector<double> y(k);
  for (auto& v : y) v = gpd_quantile({gamma, sigma}, engine.uniform());
  return y;
}

}  // namespace

TEST_CASE("gpd cdf and quantile") {
  CHECK(gpd_cdf({1.0, 1.0}, 1.0) == doctest::Approx(0.5));
  CHECK(gpd_cdf({0.5, 2.0}, 0.0) == 0.0);
  CHECK(gpd_cdf({0.5, 1.0}, 6.0) == doctest::Approx(0.9375).epsilon(1e-15));
  CHECK(gpd_quantile({1.0, 1.0}, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gpd_quantile({0.5, 1.0}, 0.9375) == doctest::Approx(6.0).epsilon(1e-14));
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    for (GpdParams g : {GpdParams{0.2, 1.0}, GpdParams{0.5, 3.0}, GpdParams{1.5, 0.1}}) {
      CHECK(std::abs(gpd_cdf(g, gpd_quantile(g, p)) - p) <= 1e-12);
    }
  }
  for (double x : {0.0, 1e-9, 0.3, 5.0, 1e4}) {
    const GpdParams g{0.7, 2.0};
    CHECK(gpd_quantile(g, gpd_cdf(g, x)) == doctest::Approx(x).epsilon(1e-10));
  }
  CHECK_THROWS_AS(gpd_cdf({0.5, 1.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(gpd_quantile({0.5, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gpd_quantile({0.5, 1.0}, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(gpd_cdf({0.5, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("top-k excesses by hand") {
  const std::vector<double> s{5.0, -1.0, 4.0, 2.0, -3.0};
  const auto e = top_k_excesses(s, 2);
  CHECK(e.threshold == 3.0);
  CHECK(e.excesses == std::vector<double>{2.0, 1.0});
  CHECK(e.k == 2);
  CHECK(e.n == 5);

  const std::vector<double> t{1.0, 2.0, 3.0};
  const auto f = top_k_excesses(t, 2);
  CHECK(f.threshold == 1.0);
  CHECK(f.excesses == std::vector<double>{2.0, 1.0});

  const std::vector<double> u{-7.0, 0.5, 3.0, -0.25, 9.0};
  CHECK(top_k_excesses(u, 4).threshold == 0.25);
  CHECK_THROWS_WITH(top_k_excesses(u, 5), "k too large");

  // Ties at the threshold: the result is the same whichever copy is picked.
  const std::vector<double> tied{4.0, 2.0, -2.0, 2.0, 1.0};
  const auto g = top_k_excesses(tied, 2);
  CHECK(g.threshold == 2.0);
  CHECK(g.excesses == std::vector<double>{2.0, 0.0});
}

TEST_CASE("excesses are sorted and exactly k values exceed the threshold") {
  Xoshiro256 engine(3);
  std::vector<double> s(1000);
  for (auto& v : s) v = engine.uniform() - 0.5;
  const auto e = top_k_excesses(s, 37);
  CHECK(std::is_sorted(e.excesses.rbegin(), e.excesses.rend()));
  const auto above = std::count_if(s.begin(), s.end(), [&](double v) { return std::abs(v) > e.threshold; });
  CHECK(above == 37);
}

TEST_CASE("LME on the GPD quantile grid") {
  const auto y = gpd_grid(0.5, 1.0, 10'000);
  const auto est = lme_fit(y, -1.0);
  CHECK(std::abs(est.gamma_hat - 0.5) <= 0.01);
  CHECK(std::abs(est.sigma_hat - 1.0) <= 0.02);

  const auto ref = oracle::lme_by_grid(y, -1.0);
  CHECK(est.gamma_hat == doctest::Approx(ref[0]).epsilon(1e-9));
  CHECK(est.sigma_hat == doctest::Approx(ref[1]).epsilon(1e-9));

  // The log equation holds at the returned pair by construction.
  double s = 0.0;
  for (double v : y) s += std::log1p(est.gamma_hat / est.sigma_hat * v);
  CHECK(est.gamma_hat == doctest::Approx(s / 1e4).epsilon(1e-13));
  CHECK(std::abs(lme_moment_residual(y, est.b_hat, -1.0)) <= 1e-10);
  CHECK(est.residual <= kLmeResidualTolerance);
  CHECK(est.b_hat == doctest::Approx(est.gamma_hat / est.sigma_hat));
  CHECK(est.r == -1.0);
  CHECK(est.iterations > 0);
}

TEST_CASE("LME agrees with the grid oracle on random samples") {
  for (double gamma : {0.2, 0.5, 1.0}) {
    for (double r : {-0.5, -1.0, -2.0}) {
      const auto y = gpd_draws(gamma, 2.0, 500, static_cast<std::uint64_t>(gamma * 100 - r * 10));
      const auto est = lme_fit(y, r);
      const auto ref = oracle::lme_by_grid(y, r);
      CHECK(est.gamma_hat == doctest::Approx(ref[0]).epsilon(1e-8));
      CHECK(est.sigma_hat == doctest::Approx(ref[1]).epsilon(1e-8));
      CHECK(std::abs(lme_moment_residual(y, est.b_hat, r)) <= 1e-10);
    }
  }
}

TEST_CASE("LME consistency on large iid GPD samples") {
  const std::size_t k = 100'000;
  for (double gamma : {0.2, 0.5, 1.0}) {
    const auto y = gpd_draws(gamma, 1.0, k, 2024);
    for (double r : {-0.5, -1.0, -2.0}) {
      const auto est = lme_fit(y, r);
      CHECK(std::abs(est.gamma_hat - gamma) <= 5.0 * (1.0 + gamma) / std::sqrt(double(k)));
    }
  }
}

TEST_CASE("LME is scale equivariant") {
  const auto y = gpd_draws(0.4, 1.0, 800, 77);
  const auto base = lme_fit(y, -1.0);
  // Power-of-two scaling leaves every rounding step unchanged.
  for (double lambda : {0.125, 4.0, 1024.0}) {
    std::vector<double> z(y);
    for (auto& v : z) v *= lambda;
    const auto est = lme_fit(z, -1.0);
    CHECK(est.gamma_hat == base.gamma_hat);
    CHECK(est.sigma_hat == lambda * base.sigma_hat);
    CHECK(est.b_hat == base.b_hat / lambda);
  }
  for (double lambda : {0.37, 13.0}) {
    std::vector<double> z(y);
    for (auto& v : z) v *= lambda;
    const auto est = lme_fit(z, -1.0);
    CHECK(est.gamma_hat == doctest::Approx(base.gamma_hat).epsilon(1e-9));
    CHECK(est.sigma_hat == doctest::Approx(lambda * base.sigma_hat).epsilon(1e-9));
  }
}

TEST_CASE("LME errors") {
  const std::vector<double> equal(50, 2.0);
  CHECK_THROWS_WITH_AS(lme_fit(equal, -1.0), "no LME solution found", NumericalError);
  // The residual is negative for every b when all excesses agree.
  for (double b : {1e-6, 1e-3, 1.0, 1e3, 1e6}) CHECK(lme_moment_residual(equal, b, -1.0) < 0.0);

  const auto y = gpd_grid(0.5, 1.0, 100);
  CHECK_THROWS_WITH_AS(lme_fit(y, 0.0), "r must be negative", std::invalid_argument);
  CHECK_THROWS_WITH_AS(lme_fit(y, 0.5), "r must be negative", std::invalid_argument);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(lme_fit(one, -1.0), std::invalid_argument);
  const std::vector<double> negative{1.0, -1.0, 2.0};
  CHECK_THROWS_AS(lme_fit(negative, -1.0), std::invalid_argument);
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(lme_fit(zeros, -1.0), NumericalError);
}

TEST_CASE("gamma of b matches the log equation") {
  const std::vector<double> y{0.5, 1.0, 3.0};
  const double b = 0.7;
  CHECK(lme_gamma_of_b(y, b) ==
        doctest::Approx((std::log(1.35) + std::log(1.7) + std::log(3.1)) / 3.0).epsilon(1e-15));
}

TEST_CASE("excess sample wrapper") {
  const auto s = excess_sample_from_excesses({1.0, 3.0, 2.0});
  CHECK(s.excesses == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(s.k == 3);
  CHECK(s.threshold == 0.0);
}
