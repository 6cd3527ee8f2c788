#include "replica/perm_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "replica/kernels.hpp"

namespace replica {

DenseOperator permutation_operator(const Permutation& pi, std::size_t d) {
  return PermutationSum::single(pi).to_dense(d);
}

namespace {

std::size_t uniform_local_dim(const DenseOperator& a, int n) {
  const auto& dims = a.shape().dims();
  if (dims.size() != static_cast<std::size_t>(n))
    throw ShapeError("permutation size does not match register count");
  for (auto d : dims)
    if (d != dims[0]) throw ShapeError("permutations need equal local dimensions");
  return dims[0];
}

}  // namespace

DenseOperator apply_permutation_left(const Permutation& pi, const DenseOperator& a) {
  const auto d = uniform_local_dim(a, pi.size());
  return DenseOperator(a.shape(), kernels::omp::apply_left(pi.basis_map(d), a.matrix()));
}

DenseOperator apply_permutation_right(const DenseOperator& a, const Permutation& pi) {
  const auto d = uniform_local_dim(a, pi.size());
  return DenseOperator(a.shape(), kernels::omp::apply_right(a.matrix(), pi.basis_map(d)));
}

PermutationSum symmetrizer_sum(int n, std::size_t d, bool normalized) {
  PermutationSum s(n);
  const Complex c = normalized ? 1.0 / rising_factorial(static_cast<double>(d), n) : 1.0;
  for (const auto& p : all_permutations(n)) s.add(p, c);
  return s;
}

DenseOperator symmetrizer(int n, std::size_t d, bool normalized) {
  RegisterShape::uniform(static_cast<std::size_t>(n), d);
  return symmetrizer_sum(n, d, normalized).to_dense(d);
}

PermutationSum block_symmetrizer_sum(const SetPartition& blocks, int n, std::size_t d,
                                     bool normalized) {
  PermutationSum s(n);
  double c = 1;
  if (normalized)
    for (const auto& b : blocks) c /= rising_factorial(static_cast<double>(d), static_cast<int>(b.size()));
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i;
  // product over blocks of all bijections of each block onto itself
  std::function<void(std::size_t)> rec = [&](std::size_t bi) {
    if (bi == blocks.size()) {
      s.add(Permutation(images), c);
      return;
    }
    std::vector<int> target = blocks[bi];
    std::sort(target.begin(), target.end());
    do {
      for (std::size_t j = 0; j < target.size(); ++j)
        images[static_cast<std::size_t>(blocks[bi][j])] = target[j];
      rec(bi + 1);
    } while (std::next_permutation(target.begin(), target.end()));
    for (int e : blocks[bi]) images[static_cast<std::size_t>(e)] = e;
  };
  rec(0);
  return s;
}

PermutationSum delta_sum(int k, std::size_t d) {
  PermutationSum s(k);
  for (const auto& blocks : set_partitions(k)) {
    const int l = static_cast<int>(blocks.size());
    const double w = ((l - 1) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(factorial(l - 1));
    s += Complex(w) * block_symmetrizer_sum(blocks, k, d, true);
  }
  return s;
}

DenseOperator delta_operator(int k, std::size_t d) {
  RegisterShape::uniform(static_cast<std::size_t>(k), d);
  return delta_sum(k, d).to_dense(d);
}

TwirlDecomposition twirl_from_traces(const PermutationSum& traces, std::size_t d) {
  const int k = traces.size();
  if (d < static_cast<std::size_t>(k))
    throw DomainError("commutant Gram matrix singular regime");
  const auto perms = all_permutations(k);
  const auto n = static_cast<Eigen::Index>(perms.size());
  Eigen::MatrixXd g(n, n);
  Vector b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto inv = perms[static_cast<std::size_t>(i)].inverse();
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = std::pow(static_cast<double>(d),
                         inv.compose(perms[static_cast<std::size_t>(j)]).cycle_count());
    b(i) = traces.coefficients()[static_cast<std::size_t>(i)];
  }
  const Vector c = g.cast<Complex>().partialPivLu().solve(b);
  PermutationSum coeffs(k);
  for (Eigen::Index i = 0; i < n; ++i) coeffs.add(perms[static_cast<std::size_t>(i)], c(i));
  return {k, d, coeffs};
}

TwirlDecomposition twirl_coefficients(const DenseOperator& o, int k, std::size_t d) {
  if (d < static_cast<std::size_t>(k))
    throw DomainError("commutant Gram matrix singular regime");
  if (uniform_local_dim(o, k) != d) throw ShapeError("observable local dimension mismatch");
  if (o.hermiticity_error() > 1e-8) throw DomainError("twirl needs a Hermitian observable");
  PermutationSum traces(k);
  for (const auto& p : all_permutations(k)) {
    // tr(pi^dagger O) = tr(O pi^{-1})
    traces.add(p, kernels::omp::permutation_trace(o.matrix(), p.inverse().basis_map(d)));
  }
  return twirl_from_traces(traces, d);
}

Complex product_permutation_trace(const std::vector<Matrix>& factors, const Permutation& tau) {
  if (static_cast<int>(factors.size()) != tau.size()) throw ShapeError("one factor per register needed");
  const auto inv = tau.inverse();
  Complex out = 1;
  for (const auto& cyc : tau.cycles()) {
    // tr(A_i A_{tau^-1(i)} A_{tau^-2(i)} ...)
    const int start = cyc.front();
    Matrix m = factors[static_cast<std::size_t>(start)];
    for (int j = inv(start); j != start; j = inv(j)) m = m * factors[static_cast<std::size_t>(j)];
    out *= m.trace();
  }
  return out;
}

double k_body_weight(const TwirlDecomposition& dec) {
  Complex s = 0;
  for (const auto& [p, c] : dec.coefficients.terms())
    if (p.is_circular() && dec.k >= 1) s += c;
  return std::abs(s);
}

}  // namespace replica
