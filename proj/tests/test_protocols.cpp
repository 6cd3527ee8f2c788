#include "doctest.h"

#include "replica/protocols.hpp"

using namespace replica;

namespace {
DensityOperator mixed(std::size_t d) { return DensityOperator::maximally_mixed(RegisterShape({d})); }
DenseOperator diag(std::vector<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
  return DenseOperator(RegisterShape({v.size()}), m);
}
DenseOperator ident(std::size_t d) { return DenseOperator::identity(RegisterShape({d})); }
}  // namespace

TEST_CASE("replica budget") {
  ReplicaBudget b(2);
  b.use(2, 10);
  b.use(1, 5);
  CHECK(b.max_used() == 2);
  CHECK(b.copies_consumed() == 25);
  CHECK_THROWS(b.use(3, 1));
}

TEST_CASE("sample counts are multinomial") {
  Rng rng(1);
  const auto c = sample_counts({0.2, 0.5, 0.3}, 100000, rng);
  CHECK(c[0] + c[1] + c[2] == 100000);
  CHECK(std::abs(c[1] - 50000) < 800);
}

TEST_CASE("swap test on the maximally mixed qubit") {
  const auto rho = mixed(2);
  CHECK(swap_test_plus_probability(rho, 2) == doctest::Approx(0.75));
  CHECK((swap_test_post_state(rho, 2, +1).matrix() - rho.matrix()).norm() < 1e-12);
  Rng rng(2);
  int plus = 0;
  for (int i = 0; i < 20000; ++i) plus += swap_test(rho, 2, rng).sign > 0;
  CHECK(std::abs(plus / 20000.0 - 0.75) < 0.01);
}

TEST_CASE("swap test formulas agree with the circuit") {
  Rng rng(3);
  for (int m : {2, 3}) {
    const auto rho = random_density(2, rng);
    const auto c = swap_test_circuit(rho, m);
    CHECK(c.plus_probability == doctest::Approx(swap_test_plus_probability(rho, m)).epsilon(1e-12));
    CHECK((c.post_plus.matrix() - swap_test_post_state(rho, m, +1).matrix()).norm() < 1e-10);
    CHECK((c.post_minus.matrix() - swap_test_post_state(rho, m, -1).matrix()).norm() < 1e-10);
  }
}

TEST_CASE("purity moment estimate") {
  Rng rng(4);
  const auto r = purity_moment_estimate(mixed(4), 2, 10000, rng);
  CHECK(std::abs(r.value - 0.25) <= 4 * r.stderr_estimate);
  CHECK(r.replica_width == 2);
}

TEST_CASE("direct estimation") {
  Rng rng(5);
  const auto z = direct_estimate(mixed(2), diag({1, -1}), 1, 20000, rng);
  CHECK(std::abs(z.value) <= 4 * z.stderr_estimate);
  const auto rho = random_density(3, rng);
  const DenseOperator o(RegisterShape({3}), random_hermitian(3, rng, 1.0));
  const double exact = exact_power_expectation(rho, o, 3);
  const auto r = direct_estimate(rho, o, 2, 50000, rng);
  CHECK(std::abs(r.value - exact) <= 4 * r.stderr_estimate);
  CHECK(r.replica_width == 3);
  CHECK_THROWS_AS(direct_estimate(rho, 2.0 * DenseOperator(o), 2, 10, rng), DomainError);
}

TEST_CASE("direct backends give the same distribution mean") {
  Rng rng(6);
  const auto rho = random_density(2, rng);
  const DenseOperator o(RegisterShape({2}), random_hermitian(2, rng, 1.0));
  const double exact = exact_power_expectation(rho, o, 3);
  for (auto b : {DirectBackend::Eigenbasis, DirectBackend::ControlledCycle}) {
    const auto dist = direct_outcomes(rho, o, 2, b);
    double mean = 0, total = 0;
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
      mean += dist.values[i] * dist.probs[i];
      total += dist.probs[i];
    }
    CHECK(total == doctest::Approx(1).epsilon(1e-10));
    CHECK(mean == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("shadow inner product") {
  Rng rng(7);
  const auto r = shadow_inner_product(mixed(4), mixed(4), ident(4), 20000, rng);
  CHECK(std::abs(r.value - 0.5) <= 4 * r.stderr_estimate);
  const auto a = DensityOperator(RegisterShape({8}), diag({0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05}).matrix());
  const auto b = DensityOperator(RegisterShape({8}), diag({0.05, 0.05, 0.2, 0.2, 0.2, 0.1, 0.1, 0.1}).matrix());
  const auto o = diag({1, -0.5, 0.25, 0.7, -1, 0.1, 0.3, -0.2});
  const double exact = 2 * (a.matrix() * b.matrix() * o.matrix()).trace().real();
  const auto s = shadow_inner_product(a, b, o, 200000, rng);
  CHECK(std::abs(s.value - exact) <= 4 * s.stderr_estimate);
}

TEST_CASE("median of means") {
  double se = 0;
  CHECK(median_of_means({1, 2, 3, 4, 100}, &se) == 3);
  CHECK(se > 0);
}

TEST_CASE("noise-free recursion is exact") {
  RecursionOptions opts;
  opts.exact = true;
  Rng rng(8);
  for (int k = 1; k <= 6; ++k) {
    const auto rho = random_density(3, rng);
    const DenseOperator o(RegisterShape({3}), random_hermitian(3, rng, 1.0));
    const auto r = recursive_estimate(rho, o, k, 0.05, rng, opts);
    CHECK(std::abs(r.value - exact_power_expectation(rho, o, k + 1)) < 1e-10);
    CHECK(r.replica_width == (k + 2) / 2);
  }
}

TEST_CASE("stochastic recursion") {
  Rng rng(9);
  const auto rho = random_density(2, rng);
  const DenseOperator o(RegisterShape({2}), random_hermitian(2, rng, 1.0));
  const auto k1 = recursive_estimate(rho, o, 1, 0.05, rng);
  CHECK(std::abs(k1.value - exact_power_expectation(rho, o, 2)) <= 0.05);
  const auto k3 = recursive_estimate(mixed(2), ident(2), 3, 0.05, rng);
  CHECK(std::abs(k3.value - 0.125) <= 0.05);
  CHECK(k3.replica_width == 2);
  CHECK_FALSE(k3.breakdown.empty());
}

TEST_CASE("recursion budget") {
  Rng rng(10);
  RecursionOptions opts;
  opts.max_copies = 1000;
  CHECK_THROWS_AS(recursive_estimate(mixed(2), ident(2), 3, 0.01, rng, opts), RecursionBudgetError);
}

TEST_CASE("product POVM") {
  const auto povm = basis_povm(Matrix::Identity(3, 3));
  CHECK(povm.completeness_error() < 1e-12);
  const auto dist = povm.outcome_distribution(mixed(3));
  for (double p : dist) CHECK(p == doctest::Approx(1.0 / 3));
  const auto two = ProductPOVM::product_of({{Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2) * 0.5},
                                           {Matrix::Identity(2, 2)}});
  CHECK(two.registers() == 2);
  CHECK(two.size() == 2);
  CHECK(two.completeness_error() < 1e-12);
}

TEST_CASE("swap distinguisher separates the k=1 instance") {
  const auto h = HardInstance::raw(1, 64);
  Strategy s;
  int ok = 0;
  for (int i = 0; i < 100; ++i) ok += distinguish(200, h, s, SeedPath(11).child(static_cast<std::uint64_t>(i))).success;
  CHECK(ok >= 90);
}

TEST_CASE("single-copy budget is blind") {
  const auto h = HardInstance::raw(1, 64);
  Strategy s;
  int ok = 0;
  for (int i = 0; i < 400; ++i) ok += distinguish(1, h, s, SeedPath(12).child(static_cast<std::uint64_t>(i))).success;
  CHECK(std::abs(ok / 400.0 - 0.5) <= 0.075);
}

TEST_CASE("one-replica battery") {
  const auto battery = one_replica_battery(16, 3);
  CHECK(battery.size() == 5);
  const auto h = HardInstance::raw(1, 16);
  for (const auto& s : battery) {
    CHECK(s.kind == Strategy::Kind::Povm);
    CHECK(s.povm->completeness_error() < 1e-9);
    int ok = 0;
    for (int i = 0; i < 400; ++i) ok += distinguish(1, h, s, SeedPath(13).child(static_cast<std::uint64_t>(i))).success;
    CHECK(std::abs(ok / 400.0 - 0.5) <= 0.1);
  }
}
