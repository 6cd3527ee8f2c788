#pragma once

#include <vector>

namespace replica {

inline constexpr int kMaxMomentDegree = 12;

double chebyshev_T(int n, double x);

struct MomentPair {
  int k;
  std::vector<double> p;  // nonincreasing, length k+1
  std::vector<double> q;
  double gap;  // sum p^{k+1} - sum q^{k+1} > 0
  double delta;

  double min_nonzero() const;
  // rescaled extremal polynomial delta * T_{k+1}((k+1)x - 1)
  double polynomial(double x) const;
};

MomentPair moment_matched_pair(int k);
double predicted_gap(int k);

// residual_i = sum p^i - sum q^i for i = 1..max_degree
std::vector<double> verify_moments(const MomentPair& pair, int max_degree);

double noninteger_power_gap(double alpha, int k);

// e_1..e_n of the entries via Newton's identities from power sums
std::vector<double> elementary_from_power_sums(const std::vector<double>& x, int n);

}  // namespace replica
