#include "replica/random.hpp"

#include <sstream>

namespace replica {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeedPath SeedPath::child(std::uint64_t index) const {
  SeedPath s = *this;
  s.path_.push_back(index);
  return s;
}

std::uint64_t SeedPath::seed() const {
  std::uint64_t h = splitmix64(root_);
  for (auto p : path_) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

std::string SeedPath::str() const {
  std::ostringstream os;
  os << root_;
  for (auto p : path_) os << '/' << p;
  return os.str();
}

Vector complex_gaussian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = g(rng);
    v(i) = Complex(re, g(rng));
  }
  return v;
}

Matrix complex_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = g(rng);
      m(i, j) = Complex(re, g(rng));
    }
  return m;
}

DensityOperator random_density(std::size_t d, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = d;
  Matrix g = complex_gaussian(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator(RegisterShape({d}), (rho + rho.adjoint()) * 0.5);
}

Matrix random_hermitian(std::size_t d, Rng& rng, double bound) {
  Matrix g = complex_gaussian(d, d, rng);
  Matrix h = (g + g.adjoint()) * 0.5;
  const auto es = eigh(h);
  const double scale = es.values.cwiseAbs().maxCoeff();
  std::uniform_real_distribution<double> u(0.3, 1.0);
  h *= bound * u(rng) / scale;
  return (h + h.adjoint()) * 0.5;
}

}  // namespace replica
