#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "replica/linalg.hpp"

namespace replica {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Hierarchical seed: root seed plus a path of counters. child() never mutates.
class SeedPath {
 public:
  explicit SeedPath(std::uint64_t root = 0) : root_(root) {}
  SeedPath child(std::uint64_t index) const;
  std::uint64_t seed() const;
  Rng rng() const { return Rng(seed()); }
  std::string str() const;
  std::uint64_t root() const { return root_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

 private:
  std::uint64_t root_;
  std::vector<std::uint64_t> path_;
};

// i.i.d. standard complex Gaussian entries, E|z|^2 = 1
Vector complex_gaussian(std::size_t n, Rng& rng);
Matrix complex_gaussian(std::size_t rows, std::size_t cols, Rng& rng);

DensityOperator random_density(std::size_t d, Rng& rng, std::size_t rank = 0);
// Hermitian with operator norm <= bound
Matrix random_hermitian(std::size_t d, Rng& rng, double bound = 1.0);

}  // namespace replica
