#pragma once

#include "replica/combinatorics.hpp"
#include "replica/linalg.hpp"
#include "replica/permutation.hpp"

namespace replica {

DenseOperator permutation_operator(const Permutation& pi, std::size_t d);
// P A and A P without materializing P
DenseOperator apply_permutation_left(const Permutation& pi, const DenseOperator& a);
DenseOperator apply_permutation_right(const DenseOperator& a, const Permutation& pi);

// S_N = sum of all permutations; normalized divides by d^{rising N}
PermutationSum symmetrizer_sum(int n, std::size_t d, bool normalized);
DenseOperator symmetrizer(int n, std::size_t d, bool normalized);

// tensor product over blocks of (normalized) block symmetrizers, on n registers
PermutationSum block_symmetrizer_sum(const SetPartition& blocks, int n, std::size_t d,
                                     bool normalized);

PermutationSum delta_sum(int k, std::size_t d);
DenseOperator delta_operator(int k, std::size_t d);

struct TwirlDecomposition {
  int k;
  std::size_t d;
  PermutationSum coefficients;
};

TwirlDecomposition twirl_coefficients(const DenseOperator& o, int k, std::size_t d);
// same solve from precomputed traces tr(pi^dagger O), one per permutation
TwirlDecomposition twirl_from_traces(const PermutationSum& traces, std::size_t d);
// tr((A_1 (x) ... (x) A_k) tau) without forming the product
Complex product_permutation_trace(const std::vector<Matrix>& factors, const Permutation& tau);
double k_body_weight(const TwirlDecomposition& dec);

}  // namespace replica
