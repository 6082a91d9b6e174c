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

#include "tailproc/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tailproc/asymptotics.hpp"
#include "tailproc/errors.hpp"
#include "tailproc/estimator.hpp"
#include "tailproc/montecarlo.hpp"
#include "tailproc/process.hpp"
#include "tailproc/report_io.hpp"
#include "tailproc/second_order.hpp"

namespace tailproc::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags describing the coefficient sequence, shared by several subcommands.
struct CoefficientFlags {
  std::vector<double> coeffs{1.0};
  std::vector<double> ar;
  std::vector<double> ma;
  CLI::Option* coeffs_opt = nullptr;
  CLI::Option* ar_opt = nullptr;
  CLI::Option* ma_opt = nullptr;

  void attach(CLI::App& app) {
    coeffs_opt = app.add_option("--coeffs", coeffs, "MA coefficients c_0,c_1,...")
                     ->delimiter(',')
                     ->capture_default_str();
    ar_opt = app.add_option("--ar", ar, "AR coefficients phi_1,...,phi_p")
                 ->delimiter(',')
                 ->capture_default_str();
    ma_opt = app.add_option("--ma", ma, "MA coefficients theta_1,...,theta_q")
                 ->delimiter(',')
                 ->capture_default_str();
  }

  bool arma_given() const { return ar_opt->count() > 0 || ma_opt->count() > 0; }

  CoefficientSequence build() const {
    if (arma_given()) {
      if (coeffs_opt->count() > 0) throw UsageError("give either --coeffs or --ar/--ma, not both");
      return arma_to_ma(ar, ma);
    }
    return CoefficientSequence::explicit_coefficients(coeffs);
  }
};

InnovationModel make_model(const std::string& name, double alpha) {
  return innovation_kind_from_string(name) == InnovationKind::one_sided_pareto
             ? InnovationModel::one_sided_pareto(alpha)
             : InnovationModel::two_sided_pareto(alpha);
}

// Writes to `path`, or to `out` when path is "-".
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  write(file);
  if (!file) throw std::runtime_error("failed writing output file: " + path);
}

std::vector<double> read_input(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot open input file: " + path);
  return read_series_csv(file);
}

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  CoefficientFlags coeffs;
  double alpha = 3.0;
  std::string model = "one_sided_pareto";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string output = "-";
  std::string format = "csv";

  void attach(CLI::App& app) {
    coeffs.attach(app);
    app.add_option("--alpha", alpha, "innovation tail index")->capture_default_str();
    app.add_option("--model", model, "one_sided_pareto or two_sided_pareto")
        ->check(CLI::IsMember({"one_sided_pareto", "two_sided_pareto"}))
        ->capture_default_str();
    app.add_option("--n", n, "series length")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--output", output, "output path, - for stdout")->capture_default_str();
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }

  int run(std::ostream& out) const {
    const SimulatedPath path = simulate(coeffs.build(), make_model(model, alpha), n, seed);
    emit(output, out, [&](std::ostream& os) {
      if (format == "csv") {
        write_series_csv(os, path.values);
      } else {
        os << json{{"seed", path.seed},
                   {"config_fingerprint", path.config_fingerprint},
                   {"values", path.values}}
                  .dump(2)
           << '\n';
      }
    });
    return kExitOk;
  }
};

// --------------------------------------------------------------------- fit

struct FitCmd {
  std::string input;
  std::size_t k = 0;
  double r = -1.0;
  bool excesses = false;
  std::string output = "-";
  CLI::Option* k_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--input", input, "single-column CSV of a series or of excesses")->required();
    k_opt = app.add_option("--k", k, "number of excesses; defaults to the input size with --excesses")
                ->capture_default_str();
    app.add_option("--r", r, "LME exponent, negative")->capture_default_str();
    app.add_flag("--excesses", excesses, "treat the input as excesses, not as a series [off]")
        ->capture_default_str();
    app.add_option("--output", output, "output path, - for stdout")->capture_default_str();
  }

  int run(std::ostream& out) const {
    std::vector<double> values = read_input(input);
    const bool have_k = k_opt->count() > 0;
    if (!have_k && !excesses) throw UsageError("--k is required unless --excesses is given");
    // Exactly k values are taken to be the excesses themselves.
    const bool as_excesses = excesses || values.size() == k;
    ExcessSample sample;
    if (as_excesses) {
      if (have_k && values.size() != k) {
        throw UsageError("--excesses input has " + std::to_string(values.size()) +
                         " values but --k is " + std::to_string(k));
      }
      sample = excess_sample_from_excesses(std::move(values));
    } else {
      sample = top_k_excesses(values, k);
    }
    const LmeEstimate est = lme_fit(sample, r);
    json doc = to_json(est);
    doc["k"] = sample.k;
    doc["n"] = sample.n;
    doc["threshold"] = sample.threshold;
    emit(output, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return kExitOk;
  }
};

// --------------------------------------------------------------------- cov

struct CovCmd {
  CoefficientFlags coeffs;
  double gamma = 0.5;
  double r = -1.0;
  std::string output = "-";

  void attach(CLI::App& app) {
    coeffs.attach(app);
    app.add_option("--gamma", gamma, "tail index gamma > 0")->capture_default_str();
    app.add_option("--r", r, "LME exponent, negative")->capture_default_str();
    app.add_option("--output", output, "output path, - for stdout")->capture_default_str();
  }

  int run(std::ostream& out) const {
    const CovarianceReport report = estimator_cov(gamma, r, coeffs.build());
    emit(output, out, [&](std::ostream& os) { os << to_json(report).dump(2) << '\n'; });
    return kExitOk;
  }
};

// ------------------------------------------------------------------- check

struct CheckCmd {
  CoefficientFlags coeffs;
  double alpha = 3.0;
  double xi = kDefaultXi;
  double theta = kDefaultTheta;
  std::string output = "-";

  void attach(CLI::App& app) {
    coeffs.attach(app);
    app.add_option("--alpha", alpha, "innovation tail index")->capture_default_str();
    app.add_option("--xi", xi, "fraction of the admissible eta range, in (0, 1)")
        ->capture_default_str();
    app.add_option("--theta", theta, "k(n) rule parameter, in (0, 1)")->capture_default_str();
    app.add_option("--output", output, "output path, - for stdout")->capture_default_str();
  }

  int run(std::ostream& out) const {
    const ConditionReport report = check_conditions(alpha, coeffs.build(), xi, theta);
    emit(output, out, [&](std::ostream& os) { os << to_json(report).dump(2) << '\n'; });
    return kExitOk;
  }
};

// ---------------------------------------------------------------- validate

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct ValidateCmd {
  std::string config;
  CoefficientFlags coeffs;
  double alpha = 3.0;
  std::string model = "one_sided_pareto";
  std::size_t n = 1'000'000;
  std::size_t k = 0;
  double theta = kDefaultTheta;
  double r = -0.5;
  std::size_t reps = 1000;
  std::uint64_t seed = 20260101;
  unsigned workers = default_workers();
  std::string mode = "linear_process";
  std::string output = "validation";
  std::string format = "json";
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "flat JSON file of experiment parameters");
    coeffs.attach(app);
    options["coeffs"] = coeffs.coeffs_opt;
    options["ar"] = coeffs.ar_opt;
    options["ma"] = coeffs.ma_opt;
    options["alpha"] =
        app.add_option("--alpha", alpha, "innovation tail index")->capture_default_str();
    options["model"] = app.add_option("--model", model, "one_sided_pareto or two_sided_pareto")
                           ->check(CLI::IsMember({"one_sided_pareto", "two_sided_pareto"}))
                           ->capture_default_str();
    options["n"] = app.add_option("--n", n, "series length")->capture_default_str();
    options["k"] =
        app.add_option("--k", k, "number of excesses; 0 selects the k(n) rule")->capture_default_str();
    options["theta"] =
        app.add_option("--theta", theta, "k(n) rule parameter, in (0, 1)")->capture_default_str();
    options["r"] = app.add_option("--r", r, "LME exponent, negative")->capture_default_str();
    options["reps"] = app.add_option("--reps", reps, "replications M")->capture_default_str();
    options["seed"] = app.add_option("--seed", seed, "master seed")->capture_default_str();
    options["workers"] = app.add_option("--workers", workers, "worker threads")
                             ->envname("TAILPROC_WORKERS")
                             ->capture_default_str();
    options["mode"] = app.add_option("--mode", mode, "linear_process or direct_gpd")
                          ->check(CLI::IsMember({"linear_process", "direct_gpd"}))
                          ->capture_default_str();
    options["output"] =
        app.add_option("--output", output, "path prefix for <prefix>.csv and <prefix>.json")
            ->capture_default_str();
    options["format"] = app.add_option("--format", format, "stdout summary: json or csv")
                            ->check(CLI::IsMember({"csv", "json"}))
                            ->capture_default_str();
  }

  template <class T>
  static T value_of(const json& v, const std::string& key) {
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw UsageError("invalid value for config key '" + key + "'");
    }
  }

  static std::vector<double> list_of(const json& v, const std::string& key) {
    if (v.is_array()) return value_of<std::vector<double>>(v, key);
    if (v.is_number()) return {v.get<double>()};
    if (v.is_string()) {
      std::vector<double> out;
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          out.push_back(std::stod(item, &used));
        } catch (const std::exception&) {
          throw UsageError("invalid value for config key '" + key + "'");
        }
      }
      return out;
    }
    throw UsageError("invalid value for config key '" + key + "'");
  }

  // File values apply only where the flag was not given on the command line.
  void apply_config_file() {
    if (config.empty()) return;
    std::ifstream file(config);
    if (!file) throw UsageError("cannot open config file: " + config);
    json doc;
    try {
      doc = json::parse(file);
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("malformed config file: ") + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, v] : doc.items()) {
      const auto it = options.find(key);
      if (it == options.end()) throw UsageError("unknown config key '" + key + "'");
      if (it->second->count() > 0) continue;
      if (key == "coeffs") {
        coeffs.coeffs = list_of(v, key);
      } else if (key == "ar") {
        coeffs.ar = list_of(v, key);
      } else if (key == "ma") {
        coeffs.ma = list_of(v, key);
      } else if (key == "alpha") {
        alpha = value_of<double>(v, key);
      } else if (key == "model") {
        model = value_of<std::string>(v, key);
      } else if (key == "n") {
        n = value_of<std::size_t>(v, key);
      } else if (key == "k") {
        k = value_of<std::size_t>(v, key);
      } else if (key == "theta") {
        theta = value_of<double>(v, key);
      } else if (key == "r") {
        r = value_of<double>(v, key);
      } else if (key == "reps") {
        reps = value_of<std::size_t>(v, key);
      } else if (key == "seed") {
        seed = value_of<std::uint64_t>(v, key);
      } else if (key == "workers") {
        workers = value_of<unsigned>(v, key);
      } else if (key == "mode") {
        mode = value_of<std::string>(v, key);
      } else if (key == "output") {
        output = value_of<std::string>(v, key);
      } else if (key == "format") {
        format = value_of<std::string>(v, key);
      }
    }
  }

  CoefficientSequence build_coefficients() const {
    const bool from_arma = !coeffs.ar.empty() || !coeffs.ma.empty();
    if (from_arma) return arma_to_ma(coeffs.ar, coeffs.ma);
    return CoefficientSequence::explicit_coefficients(coeffs.coeffs);
  }

  int run(std::ostream& out) {
    if (coeffs.arma_given() && coeffs.coeffs_opt->count() > 0) {
      throw UsageError("give either --coeffs or --ar/--ma, not both");
    }
    apply_config_file();
    if (model != "one_sided_pareto" && model != "two_sided_pareto") {
      throw UsageError("invalid value for config key 'model'");
    }
    if (format != "csv" && format != "json") throw UsageError("invalid value for config key 'format'");

    ExperimentConfig cfg;
    cfg.coeffs = build_coefficients();
    cfg.model = make_model(model, alpha);
    cfg.n = n;
    if (k > 0) cfg.k = k;
    cfg.theta = theta;
    cfg.r = r;
    cfg.replications = reps;
    cfg.master_seed = seed;
    cfg.workers = std::max(1u, workers);
    cfg.mode = sampling_mode_from_string(mode);

    const ValidationReport report = run_experiment(cfg);
    json doc = to_json(report);
    doc["master_seed"] = seed;
    doc["mode"] = mode;
    doc["workers"] = cfg.workers;
    emit(output + ".csv", out, [&](std::ostream& os) { write_records_csv(os, report.records); });
    emit(output + ".json", out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    if (format == "json") {
      out << doc.dump(2) << '\n';
    } else {
      write_records_csv(out, report.records);
    }
    return kExitOk;
  }
};

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tail estimation for heavy-tailed linear processes", "tailproc"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  SimulateCmd simulate_cmd;
  FitCmd fit_cmd;
  CovCmd cov_cmd;
  CheckCmd check_cmd;
  ValidateCmd validate_cmd;
  auto* simulate_app = app.add_subcommand("simulate", "simulate a linear process path to CSV");
  auto* fit_app = app.add_subcommand("fit", "fit the LME to a series or to excesses");
  auto* cov_app = app.add_subcommand("cov", "limit covariance report for (gamma, r, coeffs)");
  auto* check_app = app.add_subcommand("check", "check the normality conditions for (alpha, coeffs)");
  auto* validate_app = app.add_subcommand("validate", "Monte Carlo check of the limit law");
  simulate_cmd.attach(*simulate_app);
  fit_cmd.attach(*fit_app);
  cov_cmd.attach(*cov_app);
  check_cmd.attach(*check_app);
  validate_cmd.attach(*validate_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate_app->parsed()) return simulate_cmd.run(out);
    if (fit_app->parsed()) return fit_cmd.run(out);
    if (cov_app->parsed()) return cov_cmd.run(out);
    if (check_app->parsed()) return check_cmd.run(out);
    if (validate_app->parsed()) return validate_cmd.run(out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int dispatch(int argc, const char* const* argv) { return dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace tailproc::cli
