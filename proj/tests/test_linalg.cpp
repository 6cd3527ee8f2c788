#include "doctest.h"

#include "replica/io.hpp"
#include "replica/kernels.hpp"
#include "replica/linalg.hpp"
#include "replica/perm_algebra.hpp"
#include "replica/random.hpp"

using namespace replica;

namespace {
Matrix swap2() {
  return permutation_operator(Permutation::transposition(2, 0, 1), 2).matrix();
}
}  // namespace

TEST_CASE("tensor trace factorizes") {
  Rng rng(11);
  const DenseOperator a(RegisterShape({2}), complex_gaussian(2, 2, rng));
  const DenseOperator b(RegisterShape({3}), complex_gaussian(3, 3, rng));
  const auto ab = tensor(a, b);
  CHECK(ab.shape().dims() == std::vector<std::size_t>{2, 3});
  CHECK(std::abs(ab.trace() - a.trace() * b.trace()) < 1e-12);
}

TEST_CASE("partial trace of swap is identity") {
  const DenseOperator s(RegisterShape::uniform(2, 2), swap2());
  const auto r = partial_trace(s, {1});
  CHECK((r.matrix() - Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("partial trace agrees with brute-force contraction") {
  Rng rng(3);
  const std::vector<std::size_t> dims{2, 3, 2};
  const DenseOperator a(RegisterShape(dims), complex_gaussian(12, 12, rng));
  const auto r = partial_trace(a, {0, 2});
  Matrix ref = Matrix::Zero(4, 4);
  for (std::size_t i0 = 0; i0 < 2; ++i0)
    for (std::size_t i2 = 0; i2 < 2; ++i2)
      for (std::size_t j0 = 0; j0 < 2; ++j0)
        for (std::size_t j2 = 0; j2 < 2; ++j2)
          for (std::size_t m = 0; m < 3; ++m)
            ref(static_cast<Eigen::Index>(i0 * 2 + i2), static_cast<Eigen::Index>(j0 * 2 + j2)) +=
                a(i0 * 6 + m * 2 + i2, j0 * 6 + m * 2 + j2);
  CHECK((r.matrix() - ref).norm() < 1e-12);
}

TEST_CASE("norm facts hold on random Hermitian pairs") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const DenseOperator a(RegisterShape({4}), random_hermitian(4, rng, 1.0));
    const DenseOperator b(RegisterShape({4}), random_hermitian(4, rng, 1.0));
    const auto na = norms(a), nb = norms(b);
    CHECK(std::abs((a * b).trace()) <= na.trace_norm * nb.operator_norm + 1e-12);
    CHECK(na.operator_norm <= na.frobenius + 1e-12);
    CHECK(na.frobenius <= na.trace_norm + 1e-12);
    CHECK(na.operator_norm <= 1 + 1e-12);
  }
}

TEST_CASE("trace distance oracle") {
  const RegisterShape s({2});
  const auto zero = DensityOperator::pure(PureState::basis(s, 0));
  const auto mixed = DensityOperator::maximally_mixed(s);
  const auto t = trace_distance(zero, mixed);
  CHECK(t.distance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.spectral_lower_bound <= t.distance + 1e-12);
}

TEST_CASE("power trace from the spectrum") {
  Rng rng(9);
  const auto rho = random_density(3, rng);
  const Matrix cube = rho.matrix() * rho.matrix() * rho.matrix();
  CHECK(std::abs(rho.power_trace(3) - cube.trace().real()) < 1e-12);
  CHECK((matrix_power(rho, 3).matrix() - cube).norm() < 1e-12);
}

TEST_CASE("density operator validation") {
  Matrix bad = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(RegisterShape({2}), bad), DomainError);
  CHECK_THROWS_AS(RegisterShape::uniform(20, 4), CapacityError);
  CHECK_THROWS_AS(DenseOperator(RegisterShape({2}), Matrix::Identity(3, 3)), ShapeError);
}

TEST_CASE("serial and omp kernels agree") {
  Rng rng(21);
  const Matrix a = complex_gaussian(9, 9, rng), b = complex_gaussian(3, 3, rng);
  CHECK((kernels::serial::kron(a, b) - kernels::omp::kron(a, b)).norm() == 0);
  CHECK((kernels::serial::partial_trace(a, {3, 3}, {1}) - kernels::omp::partial_trace(a, {3, 3}, {1})).norm() ==
        0);
  const auto map = Permutation::transposition(2, 0, 1).basis_map(3);
  CHECK((kernels::serial::apply_left(map, a) - kernels::omp::apply_left(map, a)).norm() == 0);
  CHECK((kernels::serial::apply_right(a, map) - kernels::omp::apply_right(a, map)).norm() == 0);
  CHECK(std::abs(kernels::serial::permutation_trace(a, map) - kernels::omp::permutation_trace(a, map)) < 1e-12);
  const std::vector<Complex> c{0.5, Complex(0, 1)};
  const std::vector<kernels::IndexMap> maps{Permutation::identity(2).basis_map(3), map};
  CHECK((kernels::serial::permutation_combination(c, maps) - kernels::omp::permutation_combination(c, maps))
            .norm() == 0);
}

TEST_CASE("operator json round trip") {
  Rng rng(2);
  const DenseOperator a(RegisterShape({2, 3}), complex_gaussian(6, 6, rng));
  const auto b = operator_from_json(operator_to_json(a));
  CHECK(b.shape() == a.shape());
  CHECK((b.matrix() - a.matrix()).norm() == 0);
  const auto bare = operator_from_json(nlohmann::json::parse("[[1, 0], [0, [-1, 0]]]"));
  CHECK(bare.dim() == 2);
  CHECK(bare(1, 1) == Complex(-1, 0));
}

TEST_CASE("seed paths are deterministic and distinct") {
  const SeedPath root(42);
  CHECK(root.child(1).seed() == SeedPath(42).child(1).seed());
  CHECK(root.child(1).seed() != root.child(2).seed());
  CHECK(root.child(1).child(2).seed() != root.child(2).child(1).seed());
  Rng a = root.child(3).rng(), b = root.child(3).rng();
  CHECK(a() == b());
}
