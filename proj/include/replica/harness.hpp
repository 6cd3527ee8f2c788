#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace replica {

struct ExperimentConfig {
  std::string kind = "verify";
  int k = 1;
  std::size_t d = 64;
  double epsilon = 0.05;
  int trials = 300;
  int battery_trials = 2000;
  long long samples_budget = 200;
  std::uint64_t seed = 1;
  std::string output_path;
  std::optional<double> tol;
  int threads = 0;
  // success thresholds exposed as configuration
  double estimation_success = 0.9;
  double distinguishing_success = 0.8;
  // estimate
  std::string protocol = "direct";
  long long shots = 10000;
  std::string observable_path;
  // sample / averages
  double p0 = 0;
  std::string side = "P";

  // throws DomainError on invalid fields; returns regime warnings
  std::vector<std::string> validate() const;
  nlohmann::json to_json() const;
};

struct CheckResult {
  std::string id;
  std::string name;
  bool passed;
  double measured;
  double bound;
  double tolerance;
  std::string detail;
};

struct Report {
  std::string kind;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  nlohmann::json data = nlohmann::json::object();

  bool passed() const;
  // pass iff measured <= bound + tolerance
  void check(std::string id, std::string name, double measured, double bound, double tolerance,
             std::string detail = {});
  // pass iff measured >= bound - tolerance
  void check_at_least(std::string id, std::string name, double measured, double bound,
                      double tolerance, std::string detail = {});
  void fail(std::string id, std::string name, std::string detail);
  nlohmann::json to_json(bool with_environment = true) const;
  std::string to_csv() const;
};

nlohmann::json environment_fingerprint();
std::string data_dir();

// Canonical check ids produced by verify_suite, in run order.
std::vector<std::string> verify_check_ids();

Report verify_suite(const ExperimentConfig& cfg);
Report separation_experiment(const ExperimentConfig& cfg);
Report spectrum_experiment(const ExperimentConfig& cfg);
Report bounds_table(const ExperimentConfig& cfg);
Report estimate_experiment(const ExperimentConfig& cfg);
Report momentpair_report(const ExperimentConfig& cfg);
Report sample_report(const ExperimentConfig& cfg);
Report averages_report(const ExperimentConfig& cfg);

// fitted constants used by the verify suite
double rounding_constant(double percentile99, int m, std::size_t d);

}  // namespace replica
