#include <fstream>
#include <iostream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "replica/errors.hpp"
#include "replica/harness.hpp"

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kCapacity = 3 };

void emit(const replica::Report& r, bool csv, const std::string& out) {
  const std::string text = csv ? r.to_csv() : r.to_json().dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw replica::DomainError("cannot open output file " + out);
    f << text;
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& c : r.checks)
    if (!c.passed) std::cerr << "FAIL " << c.id << ": measured " << c.measured << " bound " << c.bound << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replica-restricted learning lab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value configuration file; flags override it");

  replica::ExperimentConfig cfg;
  bool json_out = false, csv_out = false;
  double tol = -1;
  std::string instance_path;
  app.add_option("--seed", cfg.seed, "root seed");
  app.add_option("--out", cfg.output_path, "write the report here instead of stdout");
  app.add_flag("--json", json_out, "JSON report (default)");
  app.add_flag("--csv", csv_out, "CSV projection of the checks");
  app.add_option("--tol", tol, "override every check tolerance");
  app.add_option("--threads", cfg.threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--k", cfg.k, "moment-matching degree / copies");
  app.add_option("--d", cfg.d, "local dimension");
  app.add_option("--epsilon", cfg.epsilon, "target error");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials");
  app.add_option("--battery-trials", cfg.battery_trials, "trials per 1-replica strategy");
  app.add_option("--budget", cfg.samples_budget, "samples budget per trial");
  app.add_option("--estimation-success", cfg.estimation_success, "success threshold for estimation");
  app.add_option("--distinguishing-success", cfg.distinguishing_success, "success threshold for distinguishing");
  app.add_option("--protocol", cfg.protocol, "direct | recursive | shadow")
      ->check(CLI::IsMember({"direct", "recursive", "shadow"}));
  app.add_option("--shots", cfg.shots, "shots for estimate");
  app.add_option("--observable", cfg.observable_path, "JSON Hermitian matrix of [re, im] pairs")
      ->check(CLI::ExistingFile);
  app.add_option("--p0", cfg.p0, "maximally mixed weight for sample/averages");
  app.add_option("--side", cfg.side, "P or Q")->check(CLI::IsMember({"P", "Q"}));
  app.add_option("--instance", instance_path, "HardInstance JSON {k, d, p0, side, seed}")
      ->check(CLI::ExistingFile);

  auto* momentpair = app.add_subcommand("momentpair", "Chebyshev moment-matched pair");
  auto* verify = app.add_subcommand("verify", "identity and bound verification suite");
  auto* estimate = app.add_subcommand("estimate", "estimate tr(rho^{k+1} O)");
  auto* separate = app.add_subcommand("separate", "replica separation demonstration");
  auto* spectrum = app.add_subcommand("spectrum", "spectrum / rank-testing constructions");
  auto* bounds = app.add_subcommand("bounds", "bound formula table");
  auto* sample = app.add_subcommand("sample", "sample a hard-instance state");
  auto* averages = app.add_subcommand("averages", "exact tensor averages of a hard instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  if (verify->parsed()) {
    if (app.get_option("--k")->count() == 0) cfg.k = 3;
    if (app.get_option("--d")->count() == 0) cfg.d = 6;
  }
  if (tol >= 0) cfg.tol = tol;
  if (json_out && csv_out) {
    std::cerr << "--json and --csv are exclusive\n";
    return kUsage;
  }
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

  try {
    if (!instance_path.empty()) {
      std::ifstream in(instance_path);
      const auto j = nlohmann::json::parse(in);
      cfg.k = j.at("k").get<int>();
      cfg.d = j.at("d").get<std::size_t>();
      cfg.p0 = j.value("p0", 0.0);
      cfg.side = j.value("side", std::string("P"));
      cfg.seed = j.value("seed", cfg.seed);
    }
    replica::Report report;
    if (momentpair->parsed()) report = replica::momentpair_report(cfg);
    else if (verify->parsed()) report = replica::verify_suite(cfg);
    else if (estimate->parsed()) report = replica::estimate_experiment(cfg);
    else if (separate->parsed()) report = replica::separation_experiment(cfg);
    else if (spectrum->parsed()) {
      if (app.get_option("--trials")->count() == 0) cfg.trials = 500;
      report = replica::spectrum_experiment(cfg);
    } else if (bounds->parsed()) report = replica::bounds_table(cfg);
    else if (sample->parsed()) report = replica::sample_report(cfg);
    else if (averages->parsed()) report = replica::averages_report(cfg);
    emit(report, csv_out, cfg.output_path);
    return report.passed() ? kPass : kCheckFailure;
  } catch (const replica::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const replica::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const replica::ShapeError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}
