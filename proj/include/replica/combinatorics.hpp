#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace replica {

// Blocks of 0-based elements; blocks ordered by smallest element.
using SetPartition = std::vector<std::vector<int>>;

// Restricted-growth-string enumeration; n <= 8.
std::vector<SetPartition> set_partitions(int n);
std::vector<SetPartition> set_partitions(const std::vector<int>& elements);

std::uint64_t stirling2(int k, int l);
std::uint64_t bell(int n);

double falling_factorial(double x, int n);
double rising_factorial(double x, int n);

class IntegerPartition {
 public:
  explicit IntegerPartition(std::vector<int> parts);
  const std::vector<int>& parts() const { return parts_; }
  int weight() const;
  int length() const { return static_cast<int>(parts_.size()); }
  bool operator<(const IntegerPartition& o) const { return parts_ < o.parts_; }
  bool operator==(const IntegerPartition& o) const { return parts_ == o.parts_; }

 private:
  std::vector<int> parts_;  // nonincreasing
};

std::vector<IntegerPartition> integer_partitions(int t);

// Coefficients over products of power sums s_mu = prod_i s_{mu_i}.
using PowerSumExpansion = std::map<IntegerPartition, std::int64_t>;

// m_lambda(x) = sum over ordered tuples of distinct indices of prod x_{i_j}^{lambda_j}
PowerSumExpansion monomial_in_powersum_basis(const IntegerPartition& lambda);
double evaluate_powersum_expansion(const PowerSumExpansion& e, const std::vector<double>& x);
double monomial_direct(const IntegerPartition& lambda, const std::vector<double>& x);
double power_sum(const std::vector<double>& x, double exponent);

// E[prod_i x_i^{falling c_i}] for x ~ Multinomial(N, p)
double multinomial_expectation(int n, const std::vector<double>& p, const std::vector<int>& c);
double multinomial_mean(int n, const std::vector<double>& p, int i);
double multinomial_second_moment(int n, const std::vector<double>& p, int i);
double multinomial_cross_moment(int n, const std::vector<double>& p, int i, int j);

}  // namespace replica
