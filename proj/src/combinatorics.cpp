#include "replica/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "replica/errors.hpp"

namespace replica {

std::vector<SetPartition> set_partitions(const std::vector<int>& elements) {
  const int n = static_cast<int>(elements.size());
  if (n > 8) throw CapacityError("set partitions limited to n <= 8");
  std::vector<SetPartition> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  // a[i] = block label of element i, a[0] = 0, a[i] <= 1 + max(a[0..i-1])
  std::vector<int> a(static_cast<std::size_t>(n), 0), mx(static_cast<std::size_t>(n), 0);
  while (true) {
    SetPartition p(static_cast<std::size_t>(mx[static_cast<std::size_t>(n - 1)] + 1));
    for (int i = 0; i < n; ++i)
      p[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(elements[static_cast<std::size_t>(i)]);
    out.push_back(std::move(p));
    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] > mx[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    mx[static_cast<std::size_t>(i)] = std::max(mx[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      mx[static_cast<std::size_t>(j)] = mx[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

std::vector<SetPartition> set_partitions(int n) {
  std::vector<int> e(static_cast<std::size_t>(n));
  std::iota(e.begin(), e.end(), 0);
  return set_partitions(e);
}

std::uint64_t stirling2(int k, int l) {
  if (k < 0 || l < 0) throw DomainError("stirling2 needs nonnegative arguments");
  if (l > k) return 0;
  std::vector<std::vector<std::uint64_t>> s(static_cast<std::size_t>(k + 1),
                                            std::vector<std::uint64_t>(static_cast<std::size_t>(k + 1), 0));
  s[0][0] = 1;
  for (int n = 1; n <= k; ++n)
    for (int j = 1; j <= n; ++j)
      s[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] =
          static_cast<std::uint64_t>(j) * s[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j)] +
          s[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j - 1)];
  return s[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

std::uint64_t bell(int n) {
  std::uint64_t b = 0;
  for (int l = 0; l <= n; ++l) b += stirling2(n, l);
  return b;
}

double falling_factorial(double x, int n) {
  double r = 1;
  for (int i = 0; i < n; ++i) r *= x - i;
  return r;
}

double rising_factorial(double x, int n) {
  double r = 1;
  for (int i = 0; i < n; ++i) r *= x + i;
  return r;
}

IntegerPartition::IntegerPartition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_)
    if (p < 1) throw DomainError("partition parts must be positive");
  std::sort(parts_.rbegin(), parts_.rend());
}

int IntegerPartition::weight() const {
  return std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::vector<IntegerPartition> integer_partitions(int t) {
  std::vector<IntegerPartition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(t, t);
  return out;
}

namespace {

void add_scaled(PowerSumExpansion& into, const PowerSumExpansion& from, std::int64_t scale) {
  for (const auto& [mu, c] : from) {
    auto& slot = into[mu];
    slot += scale * c;
  }
}

PowerSumExpansion times_power_sum(const PowerSumExpansion& e, int a) {
  PowerSumExpansion out;
  for (const auto& [mu, c] : e) {
    auto parts = mu.parts();
    parts.push_back(a);
    out[IntegerPartition(parts)] += c;
  }
  return out;
}

PowerSumExpansion expand(const std::vector<int>& lambda,
                         std::map<std::vector<int>, PowerSumExpansion>& memo) {
  if (auto it = memo.find(lambda); it != memo.end()) return it->second;
  PowerSumExpansion out;
  if (lambda.size() == 1) {
    out[IntegerPartition(lambda)] = 1;
  } else {
    // m_lambda = m_{lambda \ last} s_last - sum_j m_{lambda with last merged into j}
    std::vector<int> head(lambda.begin(), lambda.end() - 1);
    const int last = lambda.back();
    out = times_power_sum(expand(head, memo), last);
    for (std::size_t j = 0; j < head.size(); ++j) {
      auto merged = head;
      merged[j] += last;
      std::sort(merged.rbegin(), merged.rend());
      add_scaled(out, expand(merged, memo), -1);
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  memo[lambda] = out;
  return out;
}

}  // namespace

PowerSumExpansion monomial_in_powersum_basis(const IntegerPartition& lambda) {
  if (lambda.weight() > 10) throw CapacityError("monomial expansion limited to t <= 10");
  if (lambda.length() == 0) return {{IntegerPartition({}), 1}};
  std::map<std::vector<int>, PowerSumExpansion> memo;
  return expand(lambda.parts(), memo);
}

double power_sum(const std::vector<double>& x, double exponent) {
  double s = 0;
  for (double v : x)
    if (v != 0.0) s += std::pow(v, exponent);
  return s;
}

double evaluate_powersum_expansion(const PowerSumExpansion& e, const std::vector<double>& x) {
  double total = 0;
  for (const auto& [mu, c] : e) {
    double term = static_cast<double>(c);
    for (int part : mu.parts()) term *= power_sum(x, part);
    total += term;
  }
  return total;
}

double monomial_direct(const IntegerPartition& lambda, const std::vector<double>& x) {
  const auto& parts = lambda.parts();
  const int n = static_cast<int>(x.size());
  std::vector<int> idx;
  std::vector<bool> used(x.size(), false);
  std::function<double(std::size_t)> rec = [&](std::size_t j) -> double {
    if (j == parts.size()) return 1.0;
    double s = 0;
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = true;
      s += std::pow(x[static_cast<std::size_t>(i)], parts[j]) * rec(j + 1);
      used[static_cast<std::size_t>(i)] = false;
    }
    return s;
  };
  return rec(0);
}

double multinomial_expectation(int n, const std::vector<double>& p, const std::vector<int>& c) {
  if (p.size() != c.size()) throw ShapeError("weights and exponents differ in length");
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("multinomial weights must sum to 1");
  int order = 0;
  double prod = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (c[i] < 0) throw DomainError("falling exponents must be nonnegative");
    order += c[i];
    prod *= std::pow(p[i], c[i]);
  }
  return falling_factorial(n, order) * prod;
}

double multinomial_mean(int n, const std::vector<double>& p, int i) {
  return n * p.at(static_cast<std::size_t>(i));
}

double multinomial_second_moment(int n, const std::vector<double>& p, int i) {
  const double pi = p.at(static_cast<std::size_t>(i));
  return static_cast<double>(n) * (n - 1) * pi * pi + n * pi;
}

double multinomial_cross_moment(int n, const std::vector<double>& p, int i, int j) {
  return static_cast<double>(n) * (n - 1) * p.at(static_cast<std::size_t>(i)) *
         p.at(static_cast<std::size_t>(j));
}

}  // namespace replica
