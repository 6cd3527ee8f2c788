#pragma once

#include <vector>

#include "replica/ensembles.hpp"
#include "replica/perm_algebra.hpp"
#include "replica/random.hpp"

namespace replica::checks {

// max violation of the norm inequalities over random instances (<= 0 is clean)
double norm_facts(int instances, const SeedPath& path);

// max entry error of op(pi o sigma) - op(pi) op(sigma), and trace vs d^cycles
double permutation_homomorphism(int pairs, const SeedPath& path);

struct PermInequality {
  int instances = 0;
  double max_violation = -1e300;  // rhs - lhs
  double full_symmetrizer_violation = -1e300;
  double two_block_violation = -1e300;
};
PermInequality permutation_inequality(int instances, const SeedPath& path);

// Frobenius error of the Monte Carlo mean of psi^{ox n} against the normalized symmetrizer
double haar_moment_error(int n, std::size_t d, int samples, const SeedPath& path);

struct Tail {
  double frequency, bound;
};
Tail haar_overlap_tail(std::size_t d, double delta, int samples, const SeedPath& path);

double multinomial_identity_error(int max_n, int max_m);

struct MonomialCheck {
  int mismatches;          // s_t coefficient vs (-1)^{l-1}(l-1)!
  double evaluation_error;  // expansion vs direct monomial evaluation, relative
};
MonomialCheck monomial_coefficients(int max_t, const SeedPath& path);

int stirling_identity_mismatches(int max_k);

struct ChebyshevCheck {
  double moment_residual = 0;
  double gap_error = 0;
  double min_nonzero_margin = 1e300;  // min over k of min_nonzero - 2/(k+1)^3
  double small_case_error = 0;       // k=1,2 closed forms
  double polynomial_error = 0;       // |T(root)| - delta, relative
  double elementary_error = 0;
};
ChebyshevCheck chebyshev_pairs(int max_k);

// delta_operator against an independent dense enumeration
double delta_closed_form_error(int max_k, const std::vector<std::size_t>& dims);

// O = sum_j c_j (1/2)[(A_j1 (x) ... (x) A_jk) pi_j + pi_j^dagger (...)], sum |c_j| = 1
struct StructuredObservable {
  int k;
  std::size_t d;
  std::vector<double> c;
  std::vector<Permutation> perms;
  std::vector<std::vector<Matrix>> factors;

  static StructuredObservable random(int k, std::size_t d, int terms, Rng& rng);
  // tr(pi^dagger O) for every pi, in rank order
  PermutationSum traces() const;
  DenseOperator dense() const;
};

struct OComponent {
  double max_deviation = 0;
  double mean_deviation = 0;
  double bound = 0;
};
OComponent o_component(int k, std::size_t d, int count, const SeedPath& path);

struct HardMoments {
  double equal_residual;  // ||E_P - E_Q|| at k copies
  double gap_residual;    // ||(E_P - E_Q) - gap Delta|| at k+1 copies
};
HardMoments hard_instance_moments(int k, std::size_t d);

std::vector<double> rounding_distances(std::size_t d, const std::vector<double>& a, int trials,
                                       const SeedPath& path);
double percentile(std::vector<double> v, double q);

// worst |noise-free recursion - exact| over random states, k <= max_k, d <= max_d
double recursion_identity_error(int max_k, std::size_t max_d, int per_case, const SeedPath& path);

// sample sd of tr(O rho) for the k-th hard instance at dimension d, O = diag(+-1)
double concentration_sd(int k, std::size_t d, int samples, const SeedPath& path);

}  // namespace replica::checks
