#include "replica/permutation.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <sstream>

namespace replica {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)])
      throw DomainError("images do not form a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::from_one_based(const std::vector<int>& images) {
  std::vector<int> v(images);
  for (auto& x : v) --x;
  return Permutation(std::move(v));
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::cycle(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (i + 1) % n;
  return Permutation(std::move(v));
}

Permutation Permutation::transposition(int n, int a, int b) {
  auto p = identity(n).images_;
  std::swap(p.at(static_cast<std::size_t>(a)), p.at(static_cast<std::size_t>(b)));
  return Permutation(std::move(p));
}

Permutation Permutation::unrank(int n, std::size_t rank) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(pool.size());
  for (int i = n; i >= 1; --i) {
    const std::size_t f = factorial(i - 1);
    const std::size_t idx = rank / f;
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return Permutation(std::move(out));
}

Permutation Permutation::compose(const Permutation& s) const {
  if (s.size() != size()) throw ShapeError("composing permutations of different size");
  std::vector<int> v(images_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = images_[static_cast<std::size_t>(s.images_[i])];
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> v(images_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return Permutation(std::move(v));
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t s = 0; s < images_.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> c;
    for (int i = static_cast<int>(s); !seen[static_cast<std::size_t>(i)]; i = (*this)(i)) {
      seen[static_cast<std::size_t>(i)] = true;
      c.push_back(i);
    }
    out.push_back(std::move(c));
  }
  return out;
}

int Permutation::cycle_count() const {
  int count = 0;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t s = 0; s < images_.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    for (int i = static_cast<int>(s); !seen[static_cast<std::size_t>(i)]; i = (*this)(i))
      seen[static_cast<std::size_t>(i)] = true;
  }
  return count;
}

bool Permutation::is_circular() const {
  return size() >= 1 && cycle_count() == 1;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) return false;
  return true;
}

std::size_t Permutation::rank() const {
  std::size_t r = 0;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (images_[static_cast<std::size_t>(j)] < images_[static_cast<std::size_t>(i)]) ++smaller;
    r += static_cast<std::size_t>(smaller) * factorial(n - 1 - i);
  }
  return r;
}

std::string Permutation::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < images_.size(); ++i)
    os << (i ? " " : "") << images_[i] + 1;
  os << ']';
  return os.str();
}

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  out.reserve(factorial(n));
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

PermutationSum::PermutationSum(int n) : n_(n), c_(factorial(n), Complex(0)) {
  if (n > 10) throw CapacityError("permutation sums limited to N <= 10");
}

PermutationSum PermutationSum::single(const Permutation& p, Complex c) {
  PermutationSum s(p.size());
  s.add(p, c);
  return s;
}

PermutationSum& PermutationSum::operator+=(const PermutationSum& o) {
  if (o.n_ != n_) throw ShapeError("permutation sum size mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

PermutationSum& PermutationSum::operator-=(const PermutationSum& o) {
  if (o.n_ != n_) throw ShapeError("permutation sum size mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

PermutationSum& PermutationSum::operator*=(Complex s) {
  for (auto& c : c_) c *= s;
  return *this;
}

PermutationSum PermutationSum::operator*(const PermutationSum& o) const {
  if (o.n_ != n_) throw ShapeError("permutation sum size mismatch");
  PermutationSum out(n_);
  const auto a = terms(), b = o.terms();
  for (const auto& [p, cp] : a)
    for (const auto& [s, cs] : b) out.add(p.compose(s), cp * cs);
  return out;
}

PermutationSum PermutationSum::adjoint() const {
  PermutationSum out(n_);
  for (const auto& [p, c] : terms()) out.add(p.inverse(), std::conj(c));
  return out;
}

double PermutationSum::max_abs() const {
  double m = 0;
  for (auto c : c_) m = std::max(m, std::abs(c));
  return m;
}

std::vector<std::pair<Permutation, Complex>> PermutationSum::terms(double tol) const {
  std::vector<std::pair<Permutation, Complex>> out;
  for (std::size_t r = 0; r < c_.size(); ++r)
    if (std::abs(c_[r]) > tol) out.emplace_back(Permutation::unrank(n_, r), c_[r]);
  return out;
}

DenseOperator PermutationSum::to_dense(std::size_t d) const {
  auto shape = RegisterShape::uniform(static_cast<std::size_t>(n_), d);
  std::vector<Complex> coeffs;
  std::vector<kernels::IndexMap> maps;
  for (const auto& [p, c] : terms()) {
    coeffs.push_back(c);
    maps.push_back(p.basis_map(d));
  }
  if (maps.empty()) return DenseOperator(shape);
  return DenseOperator(shape, kernels::omp::permutation_combination(coeffs, maps));
}

Complex PermutationSum::trace(std::size_t d) const {
  Complex s = 0;
  for (const auto& [p, c] : terms())
    s += c * std::pow(static_cast<double>(d), p.cycle_count());
  return s;
}

Complex PermutationSum::trace_with(const DenseOperator& o) const {
  const auto& dims = o.shape().dims();
  if (dims.size() != static_cast<std::size_t>(n_) ||
      std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end())
    throw ShapeError("trace_with needs N registers of equal dimension");
  Complex s = 0;
  for (const auto& [p, c] : terms())
    s += c * kernels::omp::permutation_trace(o.matrix(), p.basis_map(dims[0]));
  return s;
}

Complex PermutationSum::trace_with_first(Complex trace_a, std::size_t d) const {
  Complex s = 0;
  for (const auto& [p, c] : terms())
    s += c * trace_a * std::pow(static_cast<double>(d), p.cycle_count() - 1);
  return s;
}

PermutationSum operator+(PermutationSum a, const PermutationSum& b) { return a += b; }
PermutationSum operator-(PermutationSum a, const PermutationSum& b) { return a -= b; }
PermutationSum operator*(Complex s, PermutationSum a) { return a *= s; }

}  // namespace replica
