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
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tailproc/process.hpp"

using namespace tailproc;

namespace {

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
  Xoshiro256 a = Xoshiro256::for_stream(7, 3);
  Xoshiro256 b = Xoshiro256::for_stream(7, 3);
  Xoshiro256 c = Xoshiro256::for_stream(7, 4);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs |= (x != c());
  }
  CHECK(differs);
  CHECK(stream_seed(1, 0) != stream_seed(0, 1));
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform_open_closed();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("inverse transform of the one-sided law") {
  const auto model = InnovationModel::one_sided_pareto(3.0);
  CHECK(model.magnitude_from_uniform(0.125) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(model.magnitude_from_uniform(1.0) == 1.0);
  CHECK(model.magnitude_from_uniform(std::nextafter(1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(model.cdf(2.0) == doctest::Approx(1.0 - 0.125));
  CHECK(model.cdf(0.5) == 0.0);
  CHECK(model.gamma() == doctest::Approx(1.0 / 3.0));
  CHECK(model.has_moment(2.9));
  CHECK_FALSE(model.has_moment(3.0));
}

TEST_CASE("innovation tail frequency matches the binomial envelope") {
  const auto z = innovation_sample(InnovationModel::one_sided_pareto(3.0), 1'000'000, 12345);
  const double hits = static_cast<double>(std::count_if(z.begin(), z.end(), [](double v) { return v > 10.0; }));
  const double frac = hits / 1e6;
  CHECK(std::abs(frac - 1e-3) <= 3.0 * std::sqrt(1e-3 / 1e6));
  CHECK(*std::min_element(z.begin(), z.end()) >= 1.0);
}

TEST_CASE("empirical cdf of one million draws is close to the exact law") {
  const double alpha = 3.0;
  auto z = innovation_sample(InnovationModel::one_sided_pareto(alpha), 1'000'000, 99);
  std::sort(z.begin(), z.end());
  const double m = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = 1.0 - std::pow(z[i], -alpha);
    d = std::max({d, f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f});
  }
  CHECK(d < 3.0 * 2.0 / std::sqrt(m));
}

TEST_CASE("two-sided law picks tails by weight") {
  const auto model = InnovationModel::two_sided_pareto(2.5, 0.7, 0.3);
  CHECK(model.from_uniforms(0.125, 0.1) > 1.0);
  CHECK(model.from_uniforms(0.125, 0.9) < -1.0);
  const auto z = innovation_sample(model, 200'000, 5);
  const double pos = static_cast<double>(std::count_if(z.begin(), z.end(), [](double v) { return v > 0; })) / 2e5;
  CHECK(std::abs(pos - 0.7) < 4.0 * std::sqrt(0.21 / 2e5));
  CHECK(std::all_of(z.begin(), z.end(), [](double v) { return std::abs(v) >= 1.0; }));
  CHECK(model.cdf(-1.0) == doctest::Approx(0.3));
  CHECK(model.cdf(1.0) == doctest::Approx(0.3));
  CHECK_THROWS_AS(InnovationModel::two_sided_pareto(3.0, 0.6, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(InnovationModel::one_sided_pareto(0.0), std::invalid_argument);
  CHECK(InnovationModel::two_sided_pareto(3.0).pi1() == 0.5);
}

TEST_CASE("innovation moments") {
  auto m3 = innovation_moments(InnovationModel::one_sided_pareto(3.0));
  CHECK(m3.mean == doctest::Approx(1.5));
  CHECK(m3.variance == doctest::Approx(1.5));
  auto m4 = innovation_moments(InnovationModel::one_sided_pareto(4.0));
  CHECK(m4.mean == doctest::Approx(4.0 / 3.0));
  CHECK(m4.variance == doctest::Approx(4.0 / 6.0));
  CHECK(error_of([] { innovation_moments(InnovationModel::one_sided_pareto(2.0)); }) ==
        "moment does not exist");
  CHECK_THROWS_AS(innovation_moments(InnovationModel::two_sided_pareto(3.0)), std::invalid_argument);
}

TEST_CASE("AR(1) expansion truncates at the certified order") {
  const std::vector<double> ar{0.5};
  const auto seq = arma_to_ma(ar, {}, 1e-12);
  REQUIRE(seq.order() == 40);
  for (std::size_t j = 0; j <= 40; ++j) CHECK(seq[j] == std::ldexp(1.0, -static_cast<int>(j)));
  CHECK(seq.truncation_error_bound() < 1e-12);
  CHECK(seq.is_arma());
  REQUIRE(seq.ar_root_modulus().has_value());
  CHECK(*seq.ar_root_modulus() == doctest::Approx(2.0));

  // The exact omitted mass is 0.5^40; the bound must cover it.
  CHECK(std::ldexp(1.0, -40) <= seq.truncation_error_bound());
}

TEST_CASE("truncation certificate covers recomputed tail terms") {
  const std::vector<std::vector<double>> ars{{0.5}, {0.9}, {0.5, 0.3}, {1.2, -0.5}, {-0.7}};
  const std::vector<double> ma{0.4, -0.2};
  for (const auto& ar : ars) {
    const auto seq = arma_to_ma(ar, ma, 1e-10);
    const std::size_t last = seq.order();
    // Recompute c_j by the plain recursion well past the truncation point.
    std::vector<double> c{1.0};
    for (std::size_t j = 1; j <= last + 20; ++j) {
      double v = j <= ma.size() ? ma[j - 1] : 0.0;
      for (std::size_t i = 1; i <= std::min(j, ar.size()); ++i) v += ar[i - 1] * c[j - i];
      c.push_back(v);
    }
    double tail = 0.0;
    for (std::size_t j = last + 1; j <= last + 20; ++j) {
      CHECK(std::abs(c[j]) <= seq.truncation_error_bound());
      CHECK(std::abs(c[j]) <= seq.tail_scale() * std::pow(seq.tail_ratio(), double(j - last - 1)) * (1 + 1e-9));
      tail += std::abs(c[j]);
    }
    CHECK(tail <= seq.truncation_error_bound());
    CHECK(seq.truncation_error_bound() < 1e-10);
    for (std::size_t j = 0; j <= last; ++j) CHECK(seq[j] == doctest::Approx(c[j]).epsilon(1e-12));
  }
}

TEST_CASE("pure MA and error paths of the ARMA expansion") {
  const std::vector<double> ma{0.5};
  const auto seq = arma_to_ma({}, ma);
  REQUIRE(seq.size() == 2);
  CHECK(seq[0] == 1.0);
  CHECK(seq[1] == 0.5);
  CHECK(seq.truncation_error_bound() == 0.0);

  const std::vector<double> unit{1.0};
  CHECK(error_of([&] { arma_to_ma(unit, {}); }) == "not causal");
  const std::vector<double> explosive{0.5, 0.6};
  CHECK(error_of([&] { arma_to_ma(explosive, {}); }) == "not causal");
  CHECK_THROWS_AS(arma_to_ma(ma, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(arma_to_ma(ma, {}, -1.0), std::invalid_argument);
}

TEST_CASE("decay certificate") {
  const auto two = CoefficientSequence::explicit_coefficients({1.0, 0.5});
  const auto cert = verify_a3(two);
  CHECK(cert.ratio == 2.0);
  CHECK(1.0 < cert.scale);
  CHECK(0.5 < cert.scale / cert.ratio);
  CHECK(cert.scale == doctest::Approx(1.0).epsilon(1e-11));

  const std::vector<double> ar{0.5};
  const auto geo = arma_to_ma(ar, {});
  const auto g = verify_a3(geo);
  CHECK(g.ratio == doctest::Approx(2.0));
  CHECK(g.scale == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t j = 0; j < geo.size(); ++j) {
    CHECK(std::abs(geo[j]) < g.scale * std::pow(g.ratio, -static_cast<double>(j)));
  }

  CHECK(error_of([] { CoefficientSequence::explicit_coefficients({0.0, 0.0}); }) ==
        "degenerate coefficients");
  CHECK_THROWS_AS(CoefficientSequence::explicit_coefficients({}), std::invalid_argument);
}

TEST_CASE("log-ratio double series") {
  const auto two = CoefficientSequence::explicit_coefficients({1.0, 0.5});
  CHECK(a4_sum(two, 1.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(a4_sum(CoefficientSequence::explicit_coefficients({1.0}), 0.7) == 0.0);
  CHECK(a4_sum(CoefficientSequence::explicit_coefficients({1.0, 1.0}), 0.7) == 0.0);
  CHECK(a4_sum(CoefficientSequence::explicit_coefficients({1.0, 0.0, 0.5}), 1.0) ==
        doctest::Approx(0.5 * std::log(2.0)));
  CHECK_THROWS_AS(a4_sum(two, 0.0), std::invalid_argument);

  const auto seq = CoefficientSequence::explicit_coefficients({0.9, -0.4, 0.25, 0.05});
  for (double gamma : {0.3, 1.0, 2.0}) {
    for (double lambda : {0.5, 3.0}) {
      CHECK(a4_sum(seq.scaled(lambda), gamma) ==
            doctest::Approx(std::pow(lambda, 1.0 / gamma) * a4_sum(seq, gamma)).epsilon(1e-12));
    }
  }
}

TEST_CASE("filter by hand convolution") {
  const std::vector<double> c{1.0, 0.5};
  const std::vector<double> z{1.0, 2.0, 4.0};
  const auto x = apply_filter(c, z);
  REQUIRE(x.size() == 2);
  CHECK(x[0] == 2.5);
  CHECK(x[1] == 5.0);
}

TEST_CASE("simulation is deterministic and iid passthrough is exact") {
  const auto model = InnovationModel::one_sided_pareto(3.0);
  const auto iid = CoefficientSequence::explicit_coefficients({1.0});
  const auto path = simulate(iid, model, 1000, 42);
  CHECK(path.values == innovation_sample(model, 1000, 42));
  CHECK(path.seed == 42);

  const auto two = CoefficientSequence::explicit_coefficients({1.0, 0.5});
  const auto a = simulate(two, model, 5000, 7);
  const auto b = simulate(two, model, 5000, 7);
  CHECK(a.values == b.values);
  CHECK(a.values.size() == 5000);
  CHECK(std::all_of(a.values.begin(), a.values.end(), [](double v) { return std::isfinite(v); }));
  CHECK(a.config_fingerprint == b.config_fingerprint);
  CHECK(a.config_fingerprint != simulate(two, model, 5001, 7).config_fingerprint);
  CHECK(a.values != simulate(two, model, 5000, 8).values);

  // Same stream, explicit convolution of the drawn innovations.
  const auto z = innovation_sample(model, 5001, 7);
  CHECK(a.values == apply_filter(two.coeffs(), z));
  CHECK_THROWS_AS(simulate(two, model, 0, 1), std::invalid_argument);
}

TEST_CASE("filter linearity under coefficient scaling") {
  const auto model = InnovationModel::two_sided_pareto(2.5);
  const auto seq = CoefficientSequence::explicit_coefficients({1.0, -0.6, 0.3, 0.1});
  const auto base = simulate(seq, model, 2000, 11).values;
  // Powers of two scale every product and partial sum without rounding.
  for (double lambda : {2.0, 0.25, -8.0}) {
    const auto scaled = simulate(seq.scaled(lambda), model, 2000, 11).values;
    for (std::size_t t = 0; t < base.size(); ++t) CHECK(scaled[t] == lambda * base[t]);
  }
  for (double lambda : {0.3, 7.1}) {
    const auto scaled = simulate(seq.scaled(lambda), model, 2000, 11).values;
    for (std::size_t t = 0; t < base.size(); ++t) {
      CHECK(scaled[t] == doctest::Approx(lambda * base[t]).epsilon(1e-13));
    }
  }
}

TEST_CASE("model names round trip") {
  CHECK(innovation_kind_from_string(to_string(InnovationKind::one_sided_pareto)) ==
        InnovationKind::one_sided_pareto);
  CHECK(innovation_kind_from_string("two_sided_pareto") == InnovationKind::two_sided_pareto);
  CHECK_THROWS_AS(innovation_kind_from_string("gauss"), std::invalid_argument);
}
