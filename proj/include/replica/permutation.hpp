#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "replica/kernels.hpp"
#include "replica/linalg.hpp"

namespace replica {

// Element of S_N. images[i] = pi(i), stored 0-based.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  static Permutation from_one_based(const std::vector<int>& images);
  static Permutation identity(int n);
  // i -> i+1 (mod n)
  static Permutation cycle(int n);
  static Permutation transposition(int n, int a, int b);
  static Permutation unrank(int n, std::size_t rank);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  // (this o s)(i) = this(s(i))
  Permutation compose(const Permutation& s) const;
  Permutation inverse() const;
  std::vector<std::vector<int>> cycles() const;
  int cycle_count() const;
  bool is_circular() const;
  bool is_identity() const;
  // lexicographic rank among all permutations of the same size
  std::size_t rank() const;
  kernels::IndexMap basis_map(std::size_t d) const {
    return kernels::basis_image(images_, d);
  }
  std::string str() const;

  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator!=(const Permutation& o) const { return images_ != o.images_; }
  bool operator<(const Permutation& o) const { return images_ < o.images_; }

 private:
  std::vector<int> images_;
};

std::size_t factorial(int n);
std::vector<Permutation> all_permutations(int n);

// Element of the group algebra C[S_N]; coefficients indexed by rank.
class PermutationSum {
 public:
  explicit PermutationSum(int n = 0);
  static PermutationSum single(const Permutation& p, Complex c = 1.0);

  int size() const { return n_; }
  const std::vector<Complex>& coefficients() const { return c_; }
  Complex coefficient(const Permutation& p) const { return c_[p.rank()]; }
  void add(const Permutation& p, Complex c) { c_[p.rank()] += c; }

  PermutationSum& operator+=(const PermutationSum& o);
  PermutationSum& operator-=(const PermutationSum& o);
  PermutationSum& operator*=(Complex s);
  // group-algebra product
  PermutationSum operator*(const PermutationSum& o) const;
  // adjoint: conj(c_pi) on pi^{-1}
  PermutationSum adjoint() const;

  double max_abs() const;
  std::vector<std::pair<Permutation, Complex>> terms(double tol = 0.0) const;

  DenseOperator to_dense(std::size_t d) const;
  // tr of the operator on (C^d)^{ox N}
  Complex trace(std::size_t d) const;
  // tr(O * this)
  Complex trace_with(const DenseOperator& o) const;
  // tr((A (x) 1 (x) ... (x) 1) * this) for A on register 0
  Complex trace_with_first(Complex trace_a, std::size_t d) const;

 private:
  int n_;
  std::vector<Complex> c_;
};

PermutationSum operator+(PermutationSum a, const PermutationSum& b);
PermutationSum operator-(PermutationSum a, const PermutationSum& b);
PermutationSum operator*(Complex s, PermutationSum a);

}  // namespace replica
