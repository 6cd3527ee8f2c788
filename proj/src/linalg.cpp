#include "replica/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "replica/kernels.hpp"

namespace replica {

RegisterShape::RegisterShape(std::vector<std::size_t> dims, std::size_t cap)
    : dims_(std::move(dims)) {
  for (auto d : dims_) {
    if (d < 2) throw DomainError("register dimension must be >= 2");
    if (total_ > cap / d)
      throw CapacityError("total dimension exceeds cap " + std::to_string(cap));
    total_ *= d;
  }
}

RegisterShape RegisterShape::uniform(std::size_t copies, std::size_t d,
                                     std::size_t cap) {
  return RegisterShape(std::vector<std::size_t>(copies, d), cap);
}

RegisterShape RegisterShape::concat(const RegisterShape& o,
                                    std::size_t cap) const {
  auto dims = dims_;
  dims.insert(dims.end(), o.dims_.begin(), o.dims_.end());
  return RegisterShape(std::move(dims), cap);
}

DenseOperator::DenseOperator(RegisterShape shape)
    : shape_(std::move(shape)),
      m_(Matrix::Zero(static_cast<Eigen::Index>(shape_.total()),
                      static_cast<Eigen::Index>(shape_.total()))) {}

DenseOperator::DenseOperator(RegisterShape shape, Matrix m)
    : shape_(std::move(shape)), m_(std::move(m)) {
  const auto n = static_cast<Eigen::Index>(shape_.total());
  if (m_.rows() != n || m_.cols() != n)
    throw ShapeError("matrix size does not match register shape");
}

DenseOperator DenseOperator::identity(const RegisterShape& shape) {
  const auto n = static_cast<Eigen::Index>(shape.total());
  return DenseOperator(shape, Matrix::Identity(n, n));
}

DenseOperator DenseOperator::adjoint() const {
  return DenseOperator(shape_, m_.adjoint());
}

DenseOperator DenseOperator::hermitian_part() const {
  return DenseOperator(shape_, (m_ + m_.adjoint()) * 0.5);
}

double DenseOperator::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& o) {
  if (shape_ != o.shape_) throw ShapeError("shape mismatch in +");
  m_ += o.m_;
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& o) {
  if (shape_ != o.shape_) throw ShapeError("shape mismatch in -");
  m_ -= o.m_;
  return *this;
}

DenseOperator& DenseOperator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
DenseOperator operator*(Complex s, DenseOperator a) { return a *= s; }

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.shape() != b.shape()) throw ShapeError("shape mismatch in *");
  return DenseOperator(a.shape(), a.matrix() * b.matrix());
}

double frobenius_distance(const DenseOperator& a, const DenseOperator& b) {
  if (a.shape() != b.shape()) throw ShapeError("shape mismatch");
  return (a.matrix() - b.matrix()).norm();
}

Eigensystem eigh(const Matrix& a) {
  const Matrix h = (a + a.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

PureState::PureState(RegisterShape shape, Vector amplitudes)
    : shape_(std::move(shape)), psi_(std::move(amplitudes)) {
  if (psi_.size() != static_cast<Eigen::Index>(shape_.total()))
    throw ShapeError("amplitude vector does not match register shape");
  if (std::abs(psi_.norm() - 1.0) > 1e-12)
    throw DomainError("pure state is not normalized");
}

PureState PureState::basis(const RegisterShape& shape, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(shape.total()));
  if (index >= shape.total()) throw IndexError("basis index out of range");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(shape, v);
}

DenseOperator PureState::projector() const {
  return DenseOperator(shape_, psi_ * psi_.adjoint());
}

DensityOperator::DensityOperator(const DenseOperator& op) : op_(op) {
  if (op.hermiticity_error() > kHermitianTol)
    throw DomainError("density operator is not Hermitian");
  op_ = op.hermitian_part();
  if (std::abs(op_.trace() - Complex(1.0)) > kHermitianTol)
    throw DomainError("density operator trace is not 1");
  eig_ = eigh(op_.matrix());
  if (eig_.values.size() > 0 && eig_.values.minCoeff() < -kHermitianTol)
    throw DomainError("density operator has a negative eigenvalue");
}

DensityOperator::DensityOperator(RegisterShape shape, const Matrix& m)
    : DensityOperator(DenseOperator(std::move(shape), m)) {}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(const RegisterShape& shape) {
  auto id = DenseOperator::identity(shape);
  id *= 1.0 / static_cast<double>(shape.total());
  return DensityOperator(id);
}

std::vector<double> DensityOperator::sorted_spectrum() const {
  std::vector<double> v(eig_.values.data(),
                        eig_.values.data() + eig_.values.size());
  for (auto& x : v) x = std::max(x, 0.0);
  std::sort(v.rbegin(), v.rend());
  return v;
}

double DensityOperator::power_trace(int n) const {
  double s = 0;
  for (Eigen::Index i = 0; i < eig_.values.size(); ++i)
    s += std::pow(std::max(eig_.values(i), 0.0), n);
  return s;
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
  auto shape = a.shape().concat(b.shape());
  return DenseOperator(shape, kernels::omp::kron(a.matrix(), b.matrix()));
}

DenseOperator tensor_power(const DenseOperator& a, std::size_t n) {
  if (n == 0) throw DomainError("tensor power needs n >= 1");
  DenseOperator out = a;
  for (std::size_t i = 1; i < n; ++i) out = tensor(out, a);
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

DenseOperator partial_trace(const DenseOperator& a,
                            const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw IndexError("keep set is empty");
  std::vector<std::size_t> k = keep;
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  const auto& dims = a.shape().dims();
  if (k.back() >= dims.size()) throw IndexError("register index out of range");
  std::vector<std::size_t> kept_dims;
  for (auto r : k) kept_dims.push_back(dims[r]);
  return DenseOperator(RegisterShape(kept_dims),
                       kernels::omp::partial_trace(a.matrix(), dims, k));
}

Norms norms(const DenseOperator& a) {
  if (a.hermiticity_error() > 1e-8) throw DomainError("norms need a Hermitian operator");
  const auto es = eigh(a.matrix());
  return {es.values.cwiseAbs().sum(), a.matrix().norm(),
          es.values.cwiseAbs().maxCoeff()};
}

TraceDistance trace_distance(const DensityOperator& rho,
                             const DensityOperator& sigma) {
  if (rho.shape() != sigma.shape()) throw ShapeError("trace distance shape mismatch");
  const auto es = eigh(rho.matrix() - sigma.matrix());
  const double dist = 0.5 * es.values.cwiseAbs().sum();
  const auto p = rho.sorted_spectrum();
  const auto q = sigma.sorted_spectrum();
  double bound = 0;
  for (std::size_t i = 0; i < p.size(); ++i) bound += std::abs(p[i] - q[i]);
  bound *= 0.5;
  if (bound > dist + 1e-9) throw std::logic_error("Mirsky bound violated");
  return {dist, bound};
}

DenseOperator matrix_power(const DensityOperator& rho, int n) {
  if (n < 1) throw DomainError("matrix power needs n >= 1");
  const auto& es = rho.spectrum();
  RealVector lam(es.values.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam(i) = std::pow(std::max(es.values(i), 0.0), n);
  Matrix m = es.vectors * lam.asDiagonal() * es.vectors.adjoint();
  return DenseOperator(rho.shape(), (m + m.adjoint()) * 0.5);
}

}  // namespace replica
