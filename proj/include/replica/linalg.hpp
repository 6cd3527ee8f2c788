#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "replica/errors.hpp"

namespace replica {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr std::size_t kDefaultDimensionCap = 65536;
inline constexpr double kHermitianTol = 1e-10;

// Local dimensions of a qudit register, register 0 first. Basis index ordering
// is row-major with register 0 the most significant digit.
class RegisterShape {
 public:
  RegisterShape() = default;
  explicit RegisterShape(std::vector<std::size_t> dims,
                         std::size_t cap = kDefaultDimensionCap);
  static RegisterShape uniform(std::size_t copies, std::size_t d,
                               std::size_t cap = kDefaultDimensionCap);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t registers() const { return dims_.size(); }
  std::size_t dim(std::size_t r) const { return dims_.at(r); }
  std::size_t total() const { return total_; }
  bool operator==(const RegisterShape& o) const { return dims_ == o.dims_; }
  bool operator!=(const RegisterShape& o) const { return !(*this == o); }

  RegisterShape concat(const RegisterShape& o,
                       std::size_t cap = kDefaultDimensionCap) const;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(RegisterShape shape);
  DenseOperator(RegisterShape shape, Matrix m);

  static DenseOperator identity(const RegisterShape& shape);

  const RegisterShape& shape() const { return shape_; }
  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }
  std::size_t dim() const { return shape_.total(); }

  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  Complex trace() const { return m_.trace(); }
  DenseOperator adjoint() const;
  DenseOperator hermitian_part() const;
  // max entrywise |A - A^dagger|
  double hermiticity_error() const;

  DenseOperator& operator+=(const DenseOperator& o);
  DenseOperator& operator-=(const DenseOperator& o);
  DenseOperator& operator*=(Complex s);

 private:
  RegisterShape shape_;
  Matrix m_;
};

DenseOperator operator+(DenseOperator a, const DenseOperator& b);
DenseOperator operator-(DenseOperator a, const DenseOperator& b);
DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator*(Complex s, DenseOperator a);
double frobenius_distance(const DenseOperator& a, const DenseOperator& b);

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;
};

// Symmetrizes (A + A^dagger)/2 before solving.
Eigensystem eigh(const Matrix& a);

class PureState {
 public:
  PureState(RegisterShape shape, Vector amplitudes);
  static PureState basis(const RegisterShape& shape, std::size_t index);

  const RegisterShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return psi_; }
  std::size_t dim() const { return shape_.total(); }
  DenseOperator projector() const;

 private:
  RegisterShape shape_;
  Vector psi_;
};

class DensityOperator {
 public:
  explicit DensityOperator(const DenseOperator& op);
  DensityOperator(RegisterShape shape, const Matrix& m);
  static DensityOperator pure(const PureState& psi);
  static DensityOperator maximally_mixed(const RegisterShape& shape);

  const DenseOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const RegisterShape& shape() const { return op_.shape(); }
  std::size_t dim() const { return op_.dim(); }
  const Eigensystem& spectrum() const { return eig_; }
  // eigenvalues clamped at 0, sorted nonincreasing
  std::vector<double> sorted_spectrum() const;
  // tr(rho^n) from the spectrum
  double power_trace(int n) const;

 private:
  DenseOperator op_;
  Eigensystem eig_;
};

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);
DenseOperator tensor_power(const DenseOperator& a, std::size_t n);
Vector tensor(const Vector& a, const Vector& b);

// keep: 0-based register indices, reported in original order.
DenseOperator partial_trace(const DenseOperator& a,
                            const std::vector<std::size_t>& keep);

struct Norms {
  double trace_norm;
  double frobenius;
  double operator_norm;
};
Norms norms(const DenseOperator& a);

struct TraceDistance {
  double distance;
  double spectral_lower_bound;  // half l1 distance of sorted spectra
};
TraceDistance trace_distance(const DensityOperator& rho,
                             const DensityOperator& sigma);

DenseOperator matrix_power(const DensityOperator& rho, int n);

}  // namespace replica
