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

#include "tailproc/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tailproc {

namespace {

using nlohmann::json;

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

json matrix_json(const Matrix2& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

json to_json(const LmeEstimate& est) {
  return {{"gamma_hat", est.gamma_hat}, {"sigma_hat", est.sigma_hat}, {"b_hat", est.b_hat},
          {"residual", est.residual},   {"iterations", est.iterations}, {"r", est.r}};
}

json to_json(const CovarianceReport& report) {
  const auto& phi = report.phi;
  const auto& raw = report.raw;
  return {
      {"gamma", phi.gamma},
      {"r", phi.r},
      {"norm_c", phi.norm_c},
      {"phi1", phi.phi1},
      {"phi2", phi.phi2},
      {"phi3", phi.phi3},
      {"truncation_error", phi.truncation_error},
      {"raw_limits",
       {{"t1", raw.t1},
        {"t2", raw.t2},
        {"t_i", raw.tI},
        {"t12", raw.t12},
        {"t1_i", raw.t1I},
        {"t2_i", raw.t2I},
        {"beta1_prime", raw.beta1p},
        {"beta2_prime", raw.beta2p},
        {"beta1", raw.beta1},
        {"beta2", raw.beta2}}},
      {"kappa1", report.kappa.kappa1},
      {"kappa2", report.kappa.kappa2},
      {"kappa3", report.kappa.kappa3},
      {"sigma_matrix", matrix_json(report.sigma_matrix)},
      {"l_matrix", matrix_json(report.l_matrix)},
      {"estimator_cov", matrix_json(report.estimator_cov)},
      {"sigma_psd", report.sigma_psd},
      {"estimator_cov_psd", report.estimator_cov_psd},
  };
}

json to_json(const ConditionReport& report) {
  json items = json::array();
  for (const auto& item : report.items) {
    items.push_back(
        {{"name", item.name}, {"passed", item.passed}, {"value", item.value}, {"note", item.note}});
  }
  return {{"alpha", report.alpha}, {"xi", report.xi},           {"eta", report.eta},
          {"theta", report.theta}, {"verdict", report.verdict}, {"failing", report.failing()},
          {"items", items}};
}

json to_json(const SecondOrderRates& rates) {
  return {{"rate_2erv", rates.rate_2erv}, {"rate_2rv", rates.rate_2rv}};
}

json to_json(const NormalityDiagnostics& diag) {
  return {{"ks_distance", diag.ks_distance},
          {"ks_p_value", diag.ks_p_value},
          {"mahalanobis_ks_distance", diag.mahalanobis_ks_distance},
          {"mahalanobis_p_value", diag.mahalanobis_p_value}};
}

json to_json(const ValidationReport& report) {
  json out = {{"n", report.n},
              {"k", report.k},
              {"gamma", report.gamma},
              {"r", report.r},
              {"sigma_nk", report.sigma_nk},
              {"replications", report.replications},
              {"failure_count", report.failure_count},
              {"empirical_mean", report.empirical_mean},
              {"theoretical_cov", matrix_json(report.theoretical_cov)},
              {"flags", report.flags},
              {"elapsed_seconds", report.elapsed_seconds}};
  out["empirical_cov"] = report.empirical_cov ? matrix_json(*report.empirical_cov) : json();
  out["relative_deviation"] =
      report.relative_deviation ? matrix_json(*report.relative_deviation) : json();
  out["normality"] = report.normality ? to_json(*report.normality) : json();
  out["second_order_rates"] =
      report.second_order_rates ? to_json(*report.second_order_rates) : json();
  return out;
}

void write_records_csv(std::ostream& out, std::span<const ReplicationRecord> records) {
  out << "index,gamma_hat,sigma_hat,z1,z2,status\n";
  for (const auto& rec : records) {
    out << rec.index << ',' << format_double(rec.gamma_hat) << ',' << format_double(rec.sigma_hat)
        << ',' << format_double(rec.z1) << ',' << format_double(rec.z2) << ','
        << to_string(rec.status) << '\n';
  }
}

void write_series_csv(std::ostream& out, std::span<const double> values) {
  out << "x\n";
  for (double v : values) out << format_double(v) << '\n';
}

std::vector<double> read_series_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string field = trim(line.substr(0, line.find(',')));
    if (field.empty()) continue;
    double v = 0.0;
    if (parse_double(field, v)) {
      values.push_back(v);
    } else if (!(line_number == 1 && values.empty())) {
      throw std::invalid_argument("non-numeric value on line " + std::to_string(line_number) +
                                  ": " + field);
    }
  }
  return values;
}

}  // namespace tailproc
