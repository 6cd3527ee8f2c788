#include "doctest.h"

#include "replica/checks.hpp"
#include "replica/combinatorics.hpp"
#include "replica/perm_algebra.hpp"
#include "replica/protocols.hpp"

using namespace replica;

TEST_CASE("3-cycle trace by explicit basis action") {
  const auto c = Permutation::cycle(3);
  const auto p = permutation_operator(c, 3);
  CHECK(std::abs(p.trace() - Complex(3)) < 1e-14);
  // digit i moves to position c(i)
  const std::size_t x = 0 * 9 + 1 * 3 + 2;  // digits (0,1,2)
  const std::size_t y = 2 * 9 + 0 * 3 + 1;  // digits (2,0,1)
  CHECK(p(y, x) == Complex(1));
}

TEST_CASE("permutation homomorphism and cycle traces") {
  CHECK(checks::permutation_homomorphism(30, SeedPath(8)) == 0);
  for (const auto& pi : all_permutations(4))
    CHECK(std::abs(permutation_operator(pi, 2).trace() - std::pow(2.0, pi.cycle_count())) < 1e-12);
}

TEST_CASE("permutation ranks round trip") {
  for (int n = 1; n <= 5; ++n)
    for (std::size_t r = 0; r < factorial(n); ++r) CHECK(Permutation::unrank(n, r).rank() == r);
  const auto c = Permutation::cycle(4);
  CHECK(c.is_circular());
  CHECK(c.inverse().is_circular());
  CHECK_FALSE(Permutation::transposition(4, 0, 1).is_circular());
  CHECK(c.compose(c.inverse()).is_identity());
}

TEST_CASE("normalized symmetrizer N=2 d=2") {
  const auto s = symmetrizer(2, 2, true);
  const Matrix ref = (Matrix::Identity(4, 4) + permutation_operator(Permutation::transposition(2, 0, 1), 2).matrix()) / 6.0;
  CHECK((s.matrix() - ref).norm() < 1e-14);
  CHECK(std::abs(s.trace() - Complex(1)) < 1e-14);
}

TEST_CASE("Haar moments approach the symmetrizer") {
  CHECK(checks::haar_moment_error(2, 2, 100000, SeedPath(4)) < 5e-3);
}

TEST_CASE("Delta closed forms") {
  for (std::size_t d : {2, 3, 4}) {
    const auto delta = delta_operator(2, d);
    const double dd = static_cast<double>(d);
    const Matrix swap = permutation_operator(Permutation::transposition(2, 0, 1), d).matrix();
    const auto n = static_cast<Eigen::Index>(d * d);
    const Matrix ref = (Matrix::Identity(n, n) + swap) / (dd * (dd + 1)) - Matrix::Identity(n, n) / (dd * dd);
    CHECK((delta.matrix() - ref).norm() < 1e-14);
    CHECK(std::abs(delta.trace()) < 1e-14);
    CHECK(std::abs((delta.matrix() * swap).trace() - Complex(1 - 1 / dd)) < 1e-14);
  }
  CHECK(checks::delta_closed_form_error(4, {2, 3}) < 1e-12);
}

TEST_CASE("Gram solve reconstructs commutant elements") {
  Rng rng(6);
  for (int k : {2, 3}) {
    PermutationSum c(k);
    for (const auto& p : all_permutations(k))
      c.add(p, Complex(std::normal_distribution<>(0, 1)(rng), std::normal_distribution<>(0, 1)(rng)));
    c += c.adjoint();
    const auto dec = twirl_coefficients(c.to_dense(3), k, 3);
    CHECK((dec.coefficients - c).max_abs() < 1e-9);
  }
}

TEST_CASE("lifted observable weight is |tr O|/d") {
  Rng rng(12);
  for (int k : {2, 3}) {
    const DenseOperator o(RegisterShape({4}), random_hermitian(4, rng, 1.0));
    const auto dec = twirl_coefficients(lifted_observable(o, k - 1), k, 4);
    const auto cyc = Permutation::cycle(k);
    // the swap is its own inverse, so both halves land on it
    const double share = k == 2 ? 4.0 : 8.0;
    CHECK(std::abs(dec.coefficients.coefficient(cyc) - o.trace() / share) < 1e-10);
    CHECK(std::abs(dec.coefficients.coefficient(cyc.inverse()) - o.trace() / share) < 1e-10);
    CHECK(k_body_weight(dec) == doctest::Approx(std::abs(o.trace().real()) / 4).epsilon(1e-10));
    if (k == 3) CHECK(std::abs(dec.coefficients.coefficient(Permutation::identity(3))) < 1e-10);
  }
}

TEST_CASE("structured observable traces agree with its dense form") {
  Rng rng(14);
  const auto o = checks::StructuredObservable::random(3, 2, 3, rng);
  const auto dense = o.dense();
  CHECK(dense.hermiticity_error() < 1e-12);
  CHECK(norms(dense).operator_norm <= 1 + 1e-9);
  const auto t = o.traces();
  for (const auto& pi : all_permutations(3))
    CHECK(std::abs(t.coefficient(pi) - apply_permutation_right(dense, pi.inverse()).trace()) < 1e-10);
}

TEST_CASE("circular weight tracks tr(O Delta)") {
  const auto oc = checks::o_component(2, 4, 20, SeedPath(15));
  CHECK(oc.bound == doctest::Approx(1.0));
  CHECK(oc.max_deviation <= oc.bound);
  // dense brute force on both sides at k=2, d=4
  Rng rng(16);
  const auto delta = delta_operator(2, 4);
  for (int i = 0; i < 10; ++i) {
    const DenseOperator o(RegisterShape::uniform(2, 4), random_hermitian(16, rng, 1.0));
    const auto dec = twirl_coefficients(o, 2, 4);
    const Complex w = dec.coefficients.coefficient(Permutation::transposition(2, 0, 1));
    CHECK(std::abs(w - (o.matrix() * delta.matrix()).trace()) <= 4.0 / 4);
  }
}

TEST_CASE("permutation inequality on random PSD products") {
  const auto r = checks::permutation_inequality(100, SeedPath(17));
  CHECK(r.instances == 100);
  CHECK(r.max_violation <= 1e-9);
  CHECK(r.full_symmetrizer_violation <= 1e-9);
  CHECK(r.two_block_violation <= 1e-9);
}

TEST_CASE("Stirling numbers") {
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(5, 3) == 25);
  CHECK(bell(5) == 52);
  CHECK(set_partitions(4).size() == 15);
  CHECK(checks::stirling_identity_mismatches(8) == 0);
}

TEST_CASE("monomial to power-sum expansion") {
  const auto e11 = monomial_in_powersum_basis(IntegerPartition({1, 1}));
  CHECK(e11.at(IntegerPartition({1, 1})) == 1);
  CHECK(e11.at(IntegerPartition({2})) == -1);
  const auto e21 = monomial_in_powersum_basis(IntegerPartition({2, 1}));
  CHECK(e21.at(IntegerPartition({2, 1})) == 1);
  CHECK(e21.at(IntegerPartition({3})) == -1);
  const std::vector<double> x{0.3, -1.2, 0.7, 2.0};
  CHECK(evaluate_powersum_expansion(e21, x) == doctest::Approx(monomial_direct(IntegerPartition({2, 1}), x)).epsilon(1e-12));
  const auto m = checks::monomial_coefficients(7, SeedPath(18));
  CHECK(m.mismatches == 0);
  CHECK(m.evaluation_error < 1e-10);
}

TEST_CASE("multinomial expectations") {
  const std::vector<double> p{0.3, 0.7};
  CHECK(multinomial_mean(4, p, 0) == doctest::Approx(1.2));
  CHECK(multinomial_cross_moment(4, p, 0, 1) == doctest::Approx(4 * 3 * 0.21));
  // exhaustive over (x1, 4 - x1)
  double brute = 0;
  for (int x = 0; x <= 4; ++x) {
    const double binom = factorial(4) / static_cast<double>(factorial(x) * factorial(4 - x));
    brute += binom * std::pow(0.3, x) * std::pow(0.7, 4 - x) * x * (4 - x);
  }
  CHECK(std::abs(multinomial_expectation(4, p, {1, 1}) - brute) < 1e-12);
  CHECK(checks::multinomial_identity_error(6, 3) < 1e-12);
}
