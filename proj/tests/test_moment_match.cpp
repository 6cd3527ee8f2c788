#include <numbers>

#include "doctest.h"

#include "replica/checks.hpp"
#include "replica/moment_match.hpp"

using namespace replica;

TEST_CASE("Chebyshev values") {
  CHECK(chebyshev_T(3, 0.5) == doctest::Approx(-1.0).epsilon(1e-14));
  const double x = std::cos(std::numbers::pi / 7);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(chebyshev_T(n, x) - std::cos(n * std::numbers::pi / 7)) < 1e-12);
  CHECK(chebyshev_T(4, 3.0) == doctest::Approx(8 * 81 - 8 * 9 + 1));
}

TEST_CASE("small moment pairs exactly") {
  const auto p1 = moment_matched_pair(1);
  CHECK(p1.p.size() == 2);
  CHECK(std::abs(p1.p[0] - 1) < 1e-12);
  CHECK(std::abs(p1.p[1]) < 1e-12);
  CHECK(std::abs(p1.q[0] - 0.5) < 1e-12);
  CHECK(std::abs(p1.q[1] - 0.5) < 1e-12);
  CHECK(std::abs(p1.gap - 0.5) < 1e-12);

  const auto p2 = moment_matched_pair(2);
  const std::vector<double> ep{2.0 / 3, 1.0 / 6, 1.0 / 6}, eq{0.5, 0.5, 0};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(p2.p[static_cast<std::size_t>(i)] - ep[static_cast<std::size_t>(i)]) < 1e-12);
    CHECK(std::abs(p2.q[static_cast<std::size_t>(i)] - eq[static_cast<std::size_t>(i)]) < 1e-12);
  }
  CHECK(std::abs(p2.gap - 1.0 / 18) < 1e-12);
}

TEST_CASE("moments match up to k with the predicted gap") {
  for (int k = 1; k <= 8; ++k) {
    const auto pair = moment_matched_pair(k);
    const auto res = verify_moments(pair, k + 1);
    for (int i = 0; i < k; ++i) CHECK(std::abs(res[static_cast<std::size_t>(i)]) <= 1e-10);
    CHECK(std::abs(res[static_cast<std::size_t>(k)] - predicted_gap(k)) <= 1e-9);
    CHECK(std::abs(pair.gap - 2 / (std::pow(2.0, k) * std::pow(k + 1.0, k))) <= 1e-9);
    double sp = 0, sq = 0;
    for (std::size_t r = 0; r <= static_cast<std::size_t>(k); ++r) {
      CHECK(pair.p[r] >= 0);
      CHECK(pair.q[r] >= 0);
      sp += pair.p[r];
      sq += pair.q[r];
    }
    CHECK(sp == doctest::Approx(1).epsilon(1e-12));
    CHECK(sq == doctest::Approx(1).epsilon(1e-12));
    CHECK(pair.min_nonzero() >= 2 / std::pow(k + 1.0, 3) - 1e-12);
  }
}

TEST_CASE("verify_moments oracle") {
  const auto v1 = verify_moments(moment_matched_pair(1), 2);
  CHECK(std::abs(v1[0]) < 1e-14);
  CHECK(v1[1] == doctest::Approx(0.5));
  const auto v2 = verify_moments(moment_matched_pair(2), 3);
  CHECK(std::abs(v2[0]) < 1e-14);
  CHECK(std::abs(v2[1]) < 1e-14);
  CHECK(v2[2] == doctest::Approx(1.0 / 18));
}

TEST_CASE("noninteger power gap keeps its sign") {
  CHECK(noninteger_power_gap(1.5, 1) == doctest::Approx(0.5 * (1 - 1 / std::sqrt(2.0))).epsilon(1e-12));
  CHECK(noninteger_power_gap(0.5, 1) == doctest::Approx(0.5 * (1 - std::sqrt(2.0))).epsilon(1e-12));
  CHECK(noninteger_power_gap(0.5, 1) < 0);
}

TEST_CASE("pair invariants and Newton identities") {
  const auto c = checks::chebyshev_pairs(8);
  CHECK(c.moment_residual < 1e-10);
  CHECK(c.gap_error < 1e-9);
  CHECK(c.min_nonzero_margin >= 0);
  CHECK(c.small_case_error < 1e-12);
  CHECK(c.polynomial_error < 1e-9);
  CHECK(c.elementary_error < 1e-9);
  const auto e = elementary_from_power_sums({1, 2, 3}, 3);
  CHECK(e[0] == doctest::Approx(6));
  CHECK(e[1] == doctest::Approx(11));
  CHECK(e[2] == doctest::Approx(6));
}

TEST_CASE("degree outside the supported range") {
  CHECK_THROWS(moment_matched_pair(0));
  CHECK_THROWS(moment_matched_pair(kMaxMomentDegree + 1));
}
