#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "replica/linalg.hpp"
#include "replica/moment_match.hpp"
#include "replica/permutation.hpp"
#include "replica/random.hpp"

namespace replica {

PureState sample_haar_state(std::size_t d, Rng& rng);
// QR of a Ginibre matrix with the diagonal of R made positive
Matrix sample_haar_unitary(std::size_t d, Rng& rng);

enum class Side { P, Q };
const char* side_name(Side s);
Side parse_side(const std::string& s);

struct EnsembleTerm {
  double p;
  std::vector<int> multiplicities;     // a_{j1..jm}
  std::optional<DensityOperator> tau;  // appended after the Haar factors
  std::optional<Matrix> rotation;      // U_j, identity when empty
};

struct EnsembleSample {
  DensityOperator state;
  std::vector<PureState> haar_states;
  SeedPath seed_path;
};

class HaarAssembledEnsemble {
 public:
  HaarAssembledEnsemble(std::vector<std::size_t> local_dims, std::vector<EnsembleTerm> terms);

  int m() const { return static_cast<int>(local_dims_.size()); }
  const std::vector<std::size_t>& local_dims() const { return local_dims_; }
  const std::vector<EnsembleTerm>& terms() const { return terms_; }
  std::size_t total_dim() const { return total_; }
  double a(int r) const { return a_[static_cast<std::size_t>(r)]; }
  double a_prime(int r) const { return a2_[static_cast<std::size_t>(r)]; }
  std::size_t d_min() const;
  double a_max() const;

  // state built from given Haar vectors
  DensityOperator assemble(const std::vector<PureState>& psi) const;
  EnsembleSample sample(const SeedPath& path) const;

 private:
  std::vector<std::size_t> local_dims_;
  std::vector<EnsembleTerm> terms_;
  std::size_t total_ = 0;
  std::vector<double> a_, a2_;
};

inline double delta_k(int k) { return std::pow(2.0 * (k + 1), -k); }

struct HardInstance {
  int k;
  std::size_t d;
  double p0;
  double scale;  // p_r = scale * pair.p_r and p0 = 1 - scale
  MomentPair pair;

  static HardInstance raw(int k, std::size_t d);
  static HardInstance with_p0(int k, std::size_t d, double p0);
  // s = (5 eps / (w delta_k))^{1/(k+1)}
  static HardInstance for_target(int k, std::size_t d, double epsilon, double w);

  std::vector<double> weights(Side side) const;
  double weight_sum(Side side) const;
  HaarAssembledEnsemble single_copy(Side side) const;
  // {rho^{ox copies}} written as an assembled ensemble; small copies only
  HaarAssembledEnsemble tensor_power_ensemble(Side side, int copies) const;
};

EnsembleSample sample_state(const HardInstance& h, Side side, const SeedPath& path);
EnsembleSample sample_state(const HaarAssembledEnsemble& e, const SeedPath& path);
DensityOperator hard_instance_state(const HardInstance& h, Side side,
                                    const std::vector<PureState>& psi);

// E[rho^{ox copies}] as a combination of permutations (valid for every d)
PermutationSum exact_tensor_average_sum(const HardInstance& h, Side side, int copies);
DenseOperator exact_tensor_average(const HardInstance& h, Side side, int copies);

PermutationSum tensor_average_gap_sum(const MomentPair& pair, std::size_t d, int copies);
DenseOperator tensor_average_gap(const MomentPair& pair, std::size_t d, int copies);

double concentration_bound(const HaarAssembledEnsemble& e, double operator_norm, double delta);
double indistinguishability_bound(const HaarAssembledEnsemble& e, int rounds);
// specialization for T rounds on k copies of a hard-instance state
double hard_instance_round_bound(const HardInstance& h, Side side, int rounds);
double two_ensembles_bound(int k, std::size_t d, double weight_sum, int rounds);

struct ReducedRounding {
  Matrix q;  // d x m isometry
  Matrix r;  // m x m upper triangular, Psi = q r
  std::vector<double> a;
  double distance;  // trace distance of sum a_r psi_r to q diag(a) q^dagger
  DensityOperator dense_state() const;
  DensityOperator dense_target(const std::vector<PureState>& samples) const;
};
ReducedRounding round_to_spectrum_reduced(const std::vector<PureState>& samples,
                                          const std::vector<double>& a);

struct RoundingResult {
  DensityOperator state;
  double distance;
};
RoundingResult round_to_spectrum(const std::vector<PureState>& samples,
                                 const std::vector<double>& a);

struct ObservableSplit {
  Matrix basis;       // d x d/2, chosen eigenvectors
  Matrix complement;  // d x d/2
  DenseOperator o0, o1;
  double trace_norm;
  double chosen_trace;
};
ObservableSplit split_observable(const DenseOperator& o);

}  // namespace replica
