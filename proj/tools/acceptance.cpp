#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "replica/checks.hpp"
#include "replica/harness.hpp"
#include "replica/moment_match.hpp"
#include "replica/protocols.hpp"

using namespace replica;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string failed_checks(const Report& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.passed) s += " " + c.id + "=" + fmt("%.4g", c.measured);
  return s;
}

Outcome moments() {
  double res = 0, gap = 0;
  for (int k = 1; k <= 8; ++k) {
    const auto pair = moment_matched_pair(k);
    const auto v = verify_moments(pair, k);
    for (double x : v) res = std::max(res, std::abs(x));
    gap = std::max(gap, std::abs(pair.gap - 2 / (std::pow(2.0, k) * std::pow(k + 1.0, k))));
  }
  const auto c = checks::chebyshev_pairs(2);
  const bool ok = res <= 1e-10 && gap <= 1e-9 && c.small_case_error <= 1e-12;
  return {ok, fmt("max moment residual %.2e, gap error %.2e, k=1,2 closed-form error %.2e", res, gap,
                  c.small_case_error)};
}

Outcome tensor_averages() {
  double eq = 0, gap = 0;
  auto run = [&](int k, std::size_t d) {
    const auto h = checks::hard_instance_moments(k, d);
    eq = std::max(eq, h.equal_residual);
    gap = std::max(gap, h.gap_residual);
  };
  for (int k : {1, 2})
    for (std::size_t d : {2, 3, 4}) run(k, d);
  run(3, 2);
  return {eq <= 1e-10 && gap <= 1e-10, fmt("equal-moment residual %.2e, gap residual %.2e", eq, gap)};
}

Outcome o_component() {
  bool ok = true;
  std::string detail;
  for (int k : {2, 3}) {
    double lo = 1e300, hi = 0, worst = 0;
    for (std::size_t d : {4, 8, 16}) {
      const auto oc = checks::o_component(k, d, 50, SeedPath(3).child(static_cast<std::uint64_t>(k * 100 + d)));
      worst = std::max(worst, oc.max_deviation / oc.bound);
      lo = std::min(lo, oc.mean_deviation * static_cast<double>(d));
      hi = std::max(hi, oc.mean_deviation * static_cast<double>(d));
    }
    ok = ok && worst <= 1 && hi / lo <= 2;
    detail += fmt("k=%d: worst deviation/bound %.3f, d*mean spread %.2f; ", k, worst, hi / lo);
  }
  return {ok, detail};
}

Outcome permutation_inequality() {
  const auto r = checks::permutation_inequality(1000, SeedPath(4));
  const bool ok = r.instances == 1000 && r.max_violation <= 1e-9 && r.full_symmetrizer_violation <= 1e-9 &&
                  r.two_block_violation <= 1e-9;
  return {ok, fmt("%d instances, max violation %.2e, full symmetrizer %.2e, two-block %.2e", r.instances,
                  r.max_violation, r.full_symmetrizer_violation, r.two_block_violation)};
}

Outcome identities() {
  const double multi = checks::multinomial_identity_error(6, 3);
  const auto mono = checks::monomial_coefficients(7, SeedPath(5));
  const int stir = checks::stirling_identity_mismatches(8);
  return {multi <= 1e-12 && mono.mismatches == 0 && stir == 0,
          fmt("multinomial error %.2e, coefficient mismatches %d, Stirling mismatches %d", multi, mono.mismatches,
              stir)};
}

Outcome upper_bound() {
  const double exact = checks::recursion_identity_error(6, 3, 3, SeedPath(6));
  bool ok = exact <= 1e-10;
  std::string detail = fmt("noise-free error %.2e; ", exact);
  const double eps = 0.05;
  for (auto [k, d] : {std::pair{3, std::size_t{2}}, std::pair{4, std::size_t{3}}}) {
    int within = 0, width_ok = 0, budget_failures = 0;
    for (int run = 0; run < 100; ++run) {
      Rng rng = SeedPath(7).child(static_cast<std::uint64_t>(k)).child(static_cast<std::uint64_t>(run)).rng();
      const auto rho = random_density(d, rng);
      const DenseOperator o(RegisterShape({d}), random_hermitian(d, rng, 1.0));
      try {
        const auto r = recursive_estimate(rho, o, k, eps, rng);
        within += std::abs(r.value - exact_power_expectation(rho, o, k + 1)) <= eps;
        width_ok += r.replica_width == (k + 2) / 2;
      } catch (const RecursionBudgetError&) {
        ++budget_failures;
      }
    }
    ok = ok && within >= 95 && width_ok == 100 - budget_failures && budget_failures == 0;
    detail += fmt("(k=%d,d=%zu) %d/100 within eps, width %d on %d runs; ", k, d, within, (k + 2) / 2, width_ok);
  }
  return {ok, detail};
}

Outcome separation() {
  ExperimentConfig c;
  c.kind = "separate";
  c.k = 1;
  c.d = 64;
  c.trials = 300;
  c.samples_budget = 200;
  c.battery_trials = 2000;
  c.distinguishing_success = 0.9;
  const auto r = separation_experiment(c);
  std::string rates;
  for (const auto& b : r.data["battery"]) rates += fmt(" %.3f", b["success_rate"].get<double>());
  return {r.passed(), fmt("swap success %.3f, exact TV %.2e, battery%s", r.data["success_rate"].get<double>(),
                          r.data["single_round_tv_bound"].get<double>(), rates.c_str()) +
                          failed_checks(r)};
}

Outcome spectrum() {
  bool ok = true;
  std::string detail;
  for (int k : {1, 2}) {
    ExperimentConfig c;
    c.kind = "spectrum";
    c.k = k;
    c.trials = 500;
    const auto r = spectrum_experiment(c);
    ok = ok && r.passed();
    detail += fmt("k=%d:", k);
    const auto& rows = r.data["rounding"];
    for (std::size_t i = 1; i < rows.size(); ++i)
      detail += fmt(" d=%zu ratio %.3f", rows[i]["d"].get<std::size_t>(),
                    rows[i]["p99"].get<double>() / rows[i - 1]["p99"].get<double>());
    detail += failed_checks(r) + "; ";
  }
  return {ok, detail};
}

struct Stat {
  double bias_z = 0;   // pooled
  int outside = 0;     // instances beyond 5 stderr
};

Outcome estimator_statistics() {
  Stat direct, shadow;
  double sum_d = 0, var_d = 0, sum_s = 0, var_s = 0;
  for (int i = 0; i < 50; ++i) {
    Rng rng = SeedPath(9).child(static_cast<std::uint64_t>(i)).rng();
    const std::size_t d = 2 + static_cast<std::size_t>(i % 3);
    const auto rho = random_density(d, rng), sigma = random_density(d, rng);
    const DenseOperator o(RegisterShape({d}), random_hermitian(d, rng, 1.0));
    const int k = 1 + i % 2;
    const auto de = direct_estimate(rho, o, k, 20000, rng);
    const double dx = de.value - exact_power_expectation(rho, o, k + 1);
    direct.outside += std::abs(dx) > 5 * de.stderr_estimate;
    sum_d += dx;
    var_d += de.stderr_estimate * de.stderr_estimate;
    const auto se = shadow_inner_product(rho, sigma, o, 20000, rng);
    const double sx = se.value - 2 * (rho.matrix() * sigma.matrix() * o.matrix()).trace().real();
    shadow.outside += std::abs(sx) > 5 * se.stderr_estimate;
    sum_s += sx;
    var_s += se.stderr_estimate * se.stderr_estimate;
  }
  direct.bias_z = std::abs(sum_d) / std::sqrt(var_d);
  shadow.bias_z = std::abs(sum_s) / std::sqrt(var_s);

  // RMSE per shot doubling on a fixed instance
  Rng rng = SeedPath(10).rng();
  const auto rho = random_density(3, rng), sigma = random_density(3, rng);
  const DenseOperator o(RegisterShape({3}), random_hermitian(3, rng, 1.0));
  const double exact_d = exact_power_expectation(rho, o, 3);
  const double exact_s = 2 * (rho.matrix() * sigma.matrix() * o.matrix()).trace().real();
  const int reps = 300;
  auto rmse = [&](auto&& estimate, double exact) {
    double s = 0;
    for (int r = 0; r < reps; ++r) {
      const double e = estimate() - exact;
      s += e * e;
    }
    return std::sqrt(s / reps);
  };
  double worst = 0;
  std::string ratios;
  for (const char* which : {"direct", "shadow"}) {
    double prev = 0;
    for (long long shots : {1000LL, 2000LL, 4000LL, 8000LL}) {
      const double e = which[0] == 'd'
                           ? rmse([&] { return direct_estimate(rho, o, 2, shots, rng).value; }, exact_d)
                           : rmse([&] { return shadow_inner_product(rho, sigma, o, shots, rng).value; }, exact_s);
      if (prev > 0) {
        const double ratio = prev / e;
        worst = std::max(worst, std::max(ratio / std::sqrt(2.0), std::sqrt(2.0) / ratio));
        ratios += fmt(" %.3f", ratio);
      }
      prev = e;
    }
    ratios += which[0] == 'd' ? " (direct);" : " (shadow)";
  }
  const bool ok = direct.outside == 0 && shadow.outside == 0 && direct.bias_z <= 5 && shadow.bias_z <= 5 &&
                  worst <= 1.3;
  return {ok, fmt("direct: %d outside 5se, pooled z %.2f; shadow: %d outside, pooled z %.2f; RMSE ratios",
                  direct.outside, direct.bias_z, shadow.outside, shadow.bias_z) +
                  ratios};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"moment matching", moments},
      {"tensor-average equality and gap", tensor_averages},
      {"circular weight vs Delta", o_component},
      {"permutation inequality", permutation_inequality},
      {"exact identities", identities},
      {"recursive upper-bound protocol", upper_bound},
      {"separation demonstration", separation},
      {"spectrum and rank constructions", spectrum},
      {"estimator statistics", estimator_statistics},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%.1fs) %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
