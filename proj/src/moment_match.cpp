#include "replica/moment_match.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "replica/combinatorics.hpp"
#include "replica/errors.hpp"

namespace replica {

double chebyshev_T(int n, double x) {
  if (n < 0) throw DomainError("Chebyshev degree must be nonnegative");
  if (n == 0) return 1.0;
  double a = 1.0, b = x;
  for (int i = 2; i <= n; ++i) {
    const double c = 2 * x * b - a;
    a = b;
    b = c;
  }
  return b;
}

double predicted_gap(int k) {
  return 2.0 / (std::pow(2.0, k) * std::pow(k + 1.0, k));
}

double MomentPair::min_nonzero() const {
  double m = 1.0;
  for (const auto* v : {&p, &q})
    for (double x : *v)
      if (x > 0) m = std::min(m, x);
  return m;
}

double MomentPair::polynomial(double x) const {
  return delta * chebyshev_T(k + 1, (k + 1) * x - 1.0);
}

namespace {

// (1 + cos(pi a/(k+1)))/(k+1) written as 2cos^2 to keep zeros exact
double root(int a, int k) {
  const int n = k + 1;
  a %= 2 * n;
  if (a > n) a = 2 * n - a;
  if (a == n) return 0.0;
  const double c = std::cos(std::numbers::pi * a / (2.0 * n));
  double x = 2.0 * c * c / n;
  if (x < 0 && x > -1e-14) x = 0.0;
  return x;
}

}  // namespace

MomentPair moment_matched_pair(int k) {
  if (k < 1 || k > kMaxMomentDegree) throw DomainError("moment pair degree out of range [1, 12]");
  MomentPair pr;
  pr.k = k;
  pr.delta = 1.0 / (std::pow(2.0, k) * std::pow(k + 1.0, k + 1));
  // T_{k+1}(cos t) = +1 at t = 2 pi j/(k+1), -1 at t = (2j+1) pi/(k+1); j = 0..k
  // enumerates each root with its multiplicity
  for (int j = 0; j <= k; ++j) {
    pr.p.push_back(root(2 * j, k));
    pr.q.push_back(root(2 * j + 1, k));
  }
  std::sort(pr.p.rbegin(), pr.p.rend());
  std::sort(pr.q.rbegin(), pr.q.rend());
  pr.gap = power_sum(pr.p, k + 1) - power_sum(pr.q, k + 1);
  if (pr.gap < 0) {
    std::swap(pr.p, pr.q);
    pr.gap = -pr.gap;
  }
  return pr;
}

std::vector<double> verify_moments(const MomentPair& pair, int max_degree) {
  std::vector<double> r;
  for (int i = 1; i <= max_degree; ++i)
    r.push_back(power_sum(pair.p, i) - power_sum(pair.q, i));
  for (int i = 1; i <= std::min(max_degree, pair.k); ++i)
    if (std::abs(r[static_cast<std::size_t>(i - 1)]) > 1e-10)
      throw std::logic_error("moment pair power sums differ below degree k+1");
  if (max_degree > pair.k &&
      std::abs(r[static_cast<std::size_t>(pair.k)] - pair.gap) > 1e-9)
    throw std::logic_error("moment pair gap disagrees with stored value");
  return r;
}

double noninteger_power_gap(double alpha, int k) {
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (std::abs(alpha - std::round(alpha)) < 1e-12) throw DomainError("alpha must be non-integer");
  const auto pr = moment_matched_pair(k);
  return 0.5 * (power_sum(pr.p, alpha) - power_sum(pr.q, alpha));
}

std::vector<double> elementary_from_power_sums(const std::vector<double>& x, int n) {
  std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0), s(static_cast<std::size_t>(n + 1), 0.0);
  e[0] = 1.0;
  for (int i = 1; i <= n; ++i) s[static_cast<std::size_t>(i)] = power_sum(x, i);
  // i e_i = sum_{j=1}^{i} (-1)^{j-1} e_{i-j} s_j
  for (int i = 1; i <= n; ++i) {
    double acc = 0;
    for (int j = 1; j <= i; ++j)
      acc += ((j - 1) % 2 == 0 ? 1.0 : -1.0) * e[static_cast<std::size_t>(i - j)] * s[static_cast<std::size_t>(j)];
    e[static_cast<std::size_t>(i)] = acc / i;
  }
  return {e.begin() + 1, e.end()};
}

}  // namespace replica
