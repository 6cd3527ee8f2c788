#include "doctest.h"

#include "replica/checks.hpp"
#include "replica/ensembles.hpp"
#include "replica/perm_algebra.hpp"

using namespace replica;

TEST_CASE("Haar overlap tail and second moment") {
  const auto t = checks::haar_overlap_tail(32, 0.3, 20000, SeedPath(1));
  CHECK(t.frequency <= t.bound);
  Rng rng(2);
  double s = 0, s2 = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto a = sample_haar_state(64, rng), b = sample_haar_state(64, rng);
    const double o = std::norm(a.amplitudes().dot(b.amplitudes()));
    s += o;
    s2 += o * o;
  }
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0 / 64) <= 3 * se);
}

TEST_CASE("Haar unitary is unitary") {
  Rng rng(3);
  const auto u = sample_haar_unitary(5, rng);
  CHECK((u.adjoint() * u - Matrix::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("q-side purity concentrates at one half") {
  const auto h = HardInstance::raw(1, 128);
  int inside = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = sample_state(h, Side::Q, SeedPath(4).child(static_cast<std::uint64_t>(i)));
    const double pur = s.state.power_trace(2);
    inside += pur >= 0.49 && pur <= 0.52;
  }
  CHECK(inside >= 950);
}

TEST_CASE("exact tensor averages") {
  // k_bar = 2 on the p side of the k=1 pair is a pure Haar state
  const auto h = HardInstance::raw(1, 3);
  CHECK((exact_tensor_average(h, Side::P, 2).matrix() - symmetrizer(2, 3, true).matrix()).norm() < 1e-12);
  for (int k = 1; k <= 2; ++k)
    for (std::size_t d : {2, 3}) {
      const auto hm = checks::hard_instance_moments(k, d);
      CHECK(hm.equal_residual < 1e-10);
      CHECK(hm.gap_residual < 1e-10);
    }
  const auto g = tensor_average_gap(moment_matched_pair(1), 2, 2);
  CHECK((g.matrix() - 0.5 * delta_operator(2, 2).matrix()).norm() < 1e-12);
  const Matrix swap = permutation_operator(Permutation::transposition(2, 0, 1), 5).matrix();
  const auto g5 = tensor_average_gap(moment_matched_pair(1), 5, 2);
  CHECK(std::abs((g5.matrix() * swap).trace() - Complex(0.5 * (1 - 0.2))) < 1e-12);
}

TEST_CASE("sampled second moment matches the exact average") {
  const auto h = HardInstance::with_p0(1, 3, 0.2);
  const auto exact = exact_tensor_average(h, Side::Q, 2);
  Matrix mc = Matrix::Zero(9, 9);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_state(h, Side::Q, SeedPath(5).child(static_cast<std::uint64_t>(i)));
    mc += kernels::serial::kron(s.state.matrix(), s.state.matrix());
  }
  CHECK((mc / n - exact.matrix()).norm() < 5e-3);
}

TEST_CASE("hard instance scaling") {
  const auto h = HardInstance::with_p0(2, 16, 0.3);
  CHECK(h.scale == doctest::Approx(0.7));
  CHECK(h.weight_sum(Side::P) == doctest::Approx(0.7));
  const auto s = sample_state(h, Side::P, SeedPath(6));
  CHECK(s.state.matrix().trace().real() == doctest::Approx(1).epsilon(1e-12));
  CHECK_THROWS_AS(HardInstance::with_p0(2, 16, 1.5), DomainError);
}

TEST_CASE("bound formulas") {
  const HaarAssembledEnsemble single({2}, {EnsembleTerm{1.0, {1}, std::nullopt, std::nullopt}});
  CHECK(concentration_bound(single, 1.0, 1.0) ==
        doctest::Approx(2 * std::exp(-2 / (18 * std::pow(std::numbers::pi, 3)))).epsilon(1e-12));
  CHECK(concentration_bound(single, 1.0, 1.0) > 1);
  const HaarAssembledEnsemble pure64({64}, {EnsembleTerm{1.0, {1}, std::nullopt, std::nullopt}});
  CHECK(indistinguishability_bound(pure64, 1) == doctest::Approx(1.0 / 64));
  CHECK(two_ensembles_bound(1, 64, 1.0, 3) == doctest::Approx(0.375));
  const auto h = HardInstance::with_p0(2, 4, 0.25);
  for (int t : {1, 4})
    CHECK(indistinguishability_bound(h.tensor_power_ensemble(Side::Q, 2), t) ==
          doctest::Approx(hard_instance_round_bound(h, Side::Q, t)).epsilon(1e-12));
}

TEST_CASE("spectrum rounding") {
  Rng rng(7);
  std::vector<PureState> s;
  for (int i = 0; i < 3; ++i) s.push_back(sample_haar_state(32, rng));
  const std::vector<double> a{0.5, 0.3, 0.2};
  const auto red = round_to_spectrum_reduced(s, a);
  const auto sp = red.dense_state().sorted_spectrum();
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(sp[i] - a[i]) < 1e-12);
  const auto full = round_to_spectrum(s, a);
  CHECK(full.distance == doctest::Approx(red.distance).epsilon(1e-9));
  CHECK(trace_distance(full.state, red.dense_target(s)).distance == doctest::Approx(red.distance).epsilon(1e-9));
  CHECK(red.distance < 0.5);
}

TEST_CASE("observable split keeps a quarter of the trace norm") {
  Matrix diag = Matrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) diag(i, i) = i < 4 ? 1 : -1;
  const auto sp = split_observable(DenseOperator(RegisterShape({8}), diag));
  CHECK(std::abs(sp.chosen_trace) == doctest::Approx(4));
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 * (2 + i % 31);
    const DenseOperator o(RegisterShape({d}), random_hermitian(d, rng, 1.0));
    const auto r = split_observable(o);
    CHECK(std::abs(r.chosen_trace) >= r.trace_norm / 4 - 1e-10);
  }
  CHECK_THROWS_AS(split_observable(DenseOperator(RegisterShape({3}), Matrix::Identity(3, 3))), DomainError);
}
