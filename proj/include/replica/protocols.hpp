#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "replica/ensembles.hpp"
#include "replica/linalg.hpp"
#include "replica/random.hpp"

namespace replica {

// Tracks the widest joint measurement and the copies consumed.
class ReplicaBudget {
 public:
  explicit ReplicaBudget(int width) : width_(width) {}
  void use(int joint_copies, long long rounds);
  int width() const { return width_; }
  int max_used() const { return max_used_; }
  long long copies_consumed() const { return consumed_; }

 private:
  int width_;
  int max_used_ = 0;
  long long consumed_ = 0;
};

struct SubEstimate {
  std::string name;
  int depth;
  double value;
  double exact;
  double target;
  long long copies;
};

struct EstimateReport {
  double value = 0;
  long long shots_used = 0;
  int replica_width = 0;
  double stderr_estimate = 0;
  std::vector<SubEstimate> breakdown;
};

std::vector<long long> sample_counts(const std::vector<double>& probs, long long shots, Rng& rng);

struct SwapTestOutcome {
  int sign;
  DensityOperator post_state;
  double success_prob;  // probability of the sampled sign
};

double swap_test_plus_probability(const DensityOperator& rho, int m);
// (rho + s rho^m)/(1 + s tr rho^m)
DensityOperator swap_test_post_state(const DensityOperator& rho, int m, int sign);
SwapTestOutcome swap_test(const DensityOperator& rho, int m, Rng& rng);

// Same quantities from the full controlled-cycle circuit on rho^{ox m}.
struct SwapTestCircuit {
  double plus_probability;
  DensityOperator post_plus, post_minus;
};
SwapTestCircuit swap_test_circuit(const DensityOperator& rho, int m);

EstimateReport purity_moment_estimate(const DensityOperator& rho, int m, long long shots, Rng& rng);

enum class DirectBackend { Auto, Eigenbasis, ControlledCycle };

// H = (1/2)[(O (x) 1) pi + pi^dagger (O (x) 1)] on k+1 registers, pi the cyclic shift
DenseOperator lifted_observable(const DenseOperator& o, int k);
double exact_power_expectation(const DensityOperator& rho, const DenseOperator& o, int n);

// value/probability pairs of a single shot
struct OutcomeDistribution {
  std::vector<double> values, probs;
};
OutcomeDistribution direct_outcomes(const DensityOperator& rho, const DenseOperator& o, int k,
                                    DirectBackend backend = DirectBackend::Auto);
EstimateReport direct_estimate(const DensityOperator& rho, const DenseOperator& o, int k,
                               long long shots, Rng& rng,
                               DirectBackend backend = DirectBackend::Auto);

inline constexpr int kShadowGroups = 20;

// One-copy random-basis measurement outcomes for a fixed state.
class ShadowSampler {
 public:
  explicit ShadowSampler(const DensityOperator& rho);
  // sum of v v^dagger over n measured copies, physical basis
  Matrix accumulate(long long n, Rng& rng) const;
  std::size_t dim() const { return d_; }

 private:
  std::size_t d_;
  Matrix basis_;
  std::vector<double> cdf_;
};

// group estimates of 2 Re tr(R S O) from per-group snapshot means
std::vector<double> shadow_group_estimates(const ShadowSampler& rho, const ShadowSampler& sigma,
                                           const DenseOperator& o, long long copies_each,
                                           int groups, Rng& rng);
double median_of_means(std::vector<double> groups, double* stderr_out = nullptr);

EstimateReport shadow_inner_product(const DensityOperator& rho, const DensityOperator& sigma,
                                    const DenseOperator& o, long long shots, Rng& rng,
                                    int groups = kShadowGroups);

struct RecursionOptions {
  bool exact = false;  // substitute exact sub-estimates
  double failure_probability = 0.01;
  // pilot copies per side per group used to size shadow batches
  long long shadow_pilot = 200;
  long long max_copies = 400'000'000;
};

struct RecursionBudgetError : BudgetError {
  RecursionBudgetError(const std::string& what, EstimateReport partial)
      : BudgetError(what), partial(std::move(partial)) {}
  EstimateReport partial;
};

EstimateReport recursive_estimate(const DensityOperator& rho, const DenseOperator& o, int k,
                                  double epsilon, Rng& rng, const RecursionOptions& opts = {});

// Non-adaptive POVM on T registers whose elements factor across registers.
class ProductPOVM {
 public:
  using Element = std::vector<Matrix>;  // one factor per register
  ProductPOVM(int registers, std::size_t local_dim, std::vector<Element> elements);
  // independent per-register POVMs; elements are indexed in mixed radix
  static ProductPOVM product_of(const std::vector<std::vector<Matrix>>& per_register);

  int registers() const { return t_; }
  std::size_t local_dim() const { return dloc_; }
  std::size_t size() const;
  double completeness_error() const;
  std::vector<double> outcome_distribution(const DensityOperator& rho) const;
  // distribution for a joint state on all registers
  std::vector<double> outcome_distribution(const DenseOperator& joint) const;
  std::size_t sample(const DensityOperator& rho, Rng& rng) const;

 private:
  int t_;
  std::size_t dloc_;
  std::vector<Element> elements_;
  std::vector<std::vector<Matrix>> per_register_;
};

ProductPOVM basis_povm(const Matrix& unitary);

struct Strategy {
  enum class Kind { SwapKPlus1, Povm } kind = Kind::SwapKPlus1;
  std::string name;
  std::optional<ProductPOVM> povm;
  std::function<Side(std::size_t)> rule;
};

struct DistinguishResult {
  Side truth;
  Side verdict;
  bool success;
  double statistic;
};

class Distinguisher {
 public:
  explicit Distinguisher(HardInstance h);
  const HardInstance& instance() const { return h_; }
  double mean(Side s) const { return s == Side::P ? mean_p_ : mean_q_; }
  DistinguishResult run(long long samples_budget, const Strategy& s, const SeedPath& path) const;

 private:
  HardInstance h_;
  double mean_p_, mean_q_;
};

DistinguishResult distinguish(long long samples_budget, const HardInstance& h, const Strategy& s,
                              const SeedPath& path);

// Five fixed single-register strategies on dimension d.
std::vector<Strategy> one_replica_battery(std::size_t d, std::uint64_t seed);

}  // namespace replica
