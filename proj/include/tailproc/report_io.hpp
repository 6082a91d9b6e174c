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

// JSON and CSV views of the library results. Field names are snake_case and
// match the C++ member names; NaN becomes null.

#ifndef TAILPROC_REPORT_IO_HPP_
#define TAILPROC_REPORT_IO_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"
#include "tailproc/asymptotics.hpp"
#include "tailproc/estimator.hpp"
#include "tailproc/montecarlo.hpp"
#include "tailproc/second_order.hpp"

namespace tailproc {

nlohmann::json matrix_json(const Matrix2& m);

nlohmann::json to_json(const LmeEstimate& est);
nlohmann::json to_json(const CovarianceReport& report);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const SecondOrderRates& rates);
nlohmann::json to_json(const NormalityDiagnostics& diag);
/// Per-replication records go to CSV; the report carries only aggregates.
nlohmann::json to_json(const ValidationReport& report);

/// Header `index,gamma_hat,sigma_hat,z1,z2,status`.
void write_records_csv(std::ostream& out, std::span<const ReplicationRecord> records);

/// One value per line under the header `x`, printed to round-trip exactly.
void write_series_csv(std::ostream& out, std::span<const double> values);

/// Reads a single numeric column. A non-numeric first line is taken as a
/// header; blank lines are skipped; any other non-numeric line throws
/// std::invalid_argument naming the line.
std::vector<double> read_series_csv(std::istream& in);

}  // namespace tailproc

#endif  // TAILPROC_REPORT_IO_HPP_
