#include "replica/ensembles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "replica/combinatorics.hpp"
#include "replica/perm_algebra.hpp"

namespace replica {

PureState sample_haar_state(std::size_t d, Rng& rng) {
  Vector v = complex_gaussian(d, rng);
  v /= v.norm();
  return PureState(RegisterShape({d}), v);
}

Matrix sample_haar_unitary(std::size_t d, Rng& rng) {
  const Matrix g = complex_gaussian(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex rii = r(i, i);
    q.col(i) *= std::abs(rii) > 0 ? rii / std::abs(rii) : Complex(1);
  }
  return q;
}

const char* side_name(Side s) { return s == Side::P ? "P" : "Q"; }

Side parse_side(const std::string& s) {
  if (s == "P" || s == "p") return Side::P;
  if (s == "Q" || s == "q") return Side::Q;
  throw DomainError("side must be P or Q");
}

HaarAssembledEnsemble::HaarAssembledEnsemble(std::vector<std::size_t> local_dims,
                                             std::vector<EnsembleTerm> terms)
    : local_dims_(std::move(local_dims)), terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("ensemble needs at least one term");
  double total_p = 0;
  a_.assign(local_dims_.size(), 0.0);
  a2_.assign(local_dims_.size(), 0.0);
  for (const auto& t : terms_) {
    if (t.multiplicities.size() != local_dims_.size())
      throw ShapeError("multiplicity vector length differs from m");
    if (t.p < 0) throw DomainError("negative term probability");
    std::size_t dim = t.tau ? t.tau->dim() : 1;
    for (std::size_t r = 0; r < local_dims_.size(); ++r) {
      for (int c = 0; c < t.multiplicities[r]; ++c) dim *= local_dims_[r];
      a_[r] += t.p * t.multiplicities[r];
      a2_[r] += t.p * t.multiplicities[r] * t.multiplicities[r];
    }
    if (total_ == 0) total_ = dim;
    if (dim != total_) throw ShapeError("ensemble terms have different dimensions");
    if (t.rotation && t.rotation->rows() != static_cast<Eigen::Index>(dim))
      throw ShapeError("rotation dimension mismatch");
    total_p += t.p;
  }
  if (std::abs(total_p - 1.0) > 1e-12) throw DomainError("term probabilities must sum to 1");
  if (total_ > kDefaultDimensionCap) throw CapacityError("ensemble dimension exceeds cap");
}

std::size_t HaarAssembledEnsemble::d_min() const {
  return *std::min_element(local_dims_.begin(), local_dims_.end());
}

double HaarAssembledEnsemble::a_max() const {
  return *std::max_element(a_.begin(), a_.end());
}

DensityOperator HaarAssembledEnsemble::assemble(const std::vector<PureState>& psi) const {
  if (psi.size() != local_dims_.size()) throw ShapeError("wrong number of Haar states");
  const auto n = static_cast<Eigen::Index>(total_);
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& t : terms_) {
    if (t.p == 0) continue;
    Vector v = Vector::Ones(1);
    for (std::size_t r = 0; r < psi.size(); ++r)
      for (int c = 0; c < t.multiplicities[r]; ++c) v = tensor(v, psi[r].amplitudes());
    Matrix x = v * v.adjoint();
    if (t.tau) x = kernels::omp::kron(x, t.tau->matrix());
    if (t.rotation) x = (*t.rotation) * x * t.rotation->adjoint();
    acc += t.p * x;
  }
  std::vector<std::size_t> dims = {total_};
  return DensityOperator(RegisterShape(dims), (acc + acc.adjoint()) * 0.5);
}

EnsembleSample HaarAssembledEnsemble::sample(const SeedPath& path) const {
  Rng rng = path.rng();
  std::vector<PureState> psi;
  for (auto d : local_dims_) psi.push_back(sample_haar_state(d, rng));
  auto state = assemble(psi);
  return {std::move(state), std::move(psi), path};
}

HardInstance HardInstance::raw(int k, std::size_t d) {
  return {k, d, 0.0, 1.0, moment_matched_pair(k)};
}

HardInstance HardInstance::with_p0(int k, std::size_t d, double p0) {
  if (p0 < 0 || p0 > 1) throw DomainError("p0 must lie in [0, 1]");
  return {k, d, p0, 1.0 - p0, moment_matched_pair(k)};
}

HardInstance HardInstance::for_target(int k, std::size_t d, double epsilon, double w) {
  if (epsilon <= 0 || w <= 0) throw DomainError("epsilon and w must be positive");
  const double s = std::pow(5 * epsilon / (w * delta_k(k)), 1.0 / (k + 1));
  if (s > 1) throw DomainError("target error too large for the scaled construction");
  return with_p0(k, d, 1.0 - s);
}

std::vector<double> HardInstance::weights(Side side) const {
  auto w = side == Side::P ? pair.p : pair.q;
  for (auto& x : w) x *= scale;
  return w;
}

double HardInstance::weight_sum(Side side) const {
  const auto w = weights(side);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

HaarAssembledEnsemble HardInstance::single_copy(Side side) const {
  const int m = k + 1;
  const auto w = weights(side);
  std::vector<EnsembleTerm> terms;
  if (p0 > 0)
    terms.push_back({p0, std::vector<int>(static_cast<std::size_t>(m), 0),
                     DensityOperator::maximally_mixed(RegisterShape({d})), std::nullopt});
  for (int r = 0; r < m; ++r) {
    if (w[static_cast<std::size_t>(r)] == 0) continue;
    std::vector<int> a(static_cast<std::size_t>(m), 0);
    a[static_cast<std::size_t>(r)] = 1;
    terms.push_back({w[static_cast<std::size_t>(r)], a, std::nullopt, std::nullopt});
  }
  return HaarAssembledEnsemble(std::vector<std::size_t>(static_cast<std::size_t>(m), d),
                               std::move(terms));
}

HaarAssembledEnsemble HardInstance::tensor_power_ensemble(Side side, int copies) const {
  const int m = k + 1;
  const auto w = weights(side);
  std::vector<double> all = {p0};
  all.insert(all.end(), w.begin(), w.end());
  std::vector<EnsembleTerm> terms;
  std::vector<int> f(static_cast<std::size_t>(copies), 0);
  const std::size_t count = static_cast<std::size_t>(std::pow(m + 1, copies));
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    double prob = 1;
    for (int i = 0; i < copies; ++i) {
      f[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(m + 1));
      c /= static_cast<std::size_t>(m + 1);
      prob *= all[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])];
    }
    if (prob == 0) continue;
    std::vector<int> a(static_cast<std::size_t>(m), 0);
    std::vector<int> canonical;  // canonical slot -> actual position
    for (int r = 1; r <= m; ++r)
      for (int i = 0; i < copies; ++i)
        if (f[static_cast<std::size_t>(i)] == r) {
          ++a[static_cast<std::size_t>(r - 1)];
          canonical.push_back(i);
        }
    const int mixed = copies - static_cast<int>(canonical.size());
    for (int i = 0; i < copies; ++i)
      if (f[static_cast<std::size_t>(i)] == 0) canonical.push_back(i);
    EnsembleTerm t{prob, a, std::nullopt, std::nullopt};
    if (mixed > 0)
      t.tau = DensityOperator::maximally_mixed(RegisterShape::uniform(static_cast<std::size_t>(mixed), d));
    const Permutation place(canonical);
    if (!place.is_identity()) t.rotation = permutation_operator(place, d).matrix();
    terms.push_back(std::move(t));
  }
  return HaarAssembledEnsemble(std::vector<std::size_t>(static_cast<std::size_t>(m), d),
                               std::move(terms));
}

DensityOperator hard_instance_state(const HardInstance& h, Side side,
                                    const std::vector<PureState>& psi) {
  const auto w = h.weights(side);
  const auto n = static_cast<Eigen::Index>(h.d);
  Matrix rho = Matrix::Identity(n, n) * (h.p0 / static_cast<double>(h.d));
  for (std::size_t r = 0; r < w.size(); ++r)
    if (w[r] != 0) rho += w[r] * psi[r].amplitudes() * psi[r].amplitudes().adjoint();
  return DensityOperator(RegisterShape({h.d}), (rho + rho.adjoint()) * 0.5);
}

EnsembleSample sample_state(const HardInstance& h, Side side, const SeedPath& path) {
  Rng rng = path.rng();
  std::vector<PureState> psi;
  for (int r = 0; r <= h.k; ++r) psi.push_back(sample_haar_state(h.d, rng));
  auto state = hard_instance_state(h, side, psi);
  return {std::move(state), std::move(psi), path};
}

EnsembleSample sample_state(const HaarAssembledEnsemble& e, const SeedPath& path) {
  return e.sample(path);
}

PermutationSum exact_tensor_average_sum(const HardInstance& h, Side side, int copies) {
  if (copies < 1 || copies > 6) throw CapacityError("exact tensor averages limited to 1..6 copies");
  const auto w = h.weights(side);
  PermutationSum total(copies);
  for (unsigned mask = 0; mask < (1u << copies); ++mask) {
    const int a = std::popcount(mask);
    const double wa = a == 0 ? 1.0 : std::pow(h.p0, a);
    if (wa == 0) continue;
    std::vector<int> rest;
    SetPartition singles;
    for (int i = 0; i < copies; ++i) {
      if (mask & (1u << i)) singles.push_back({i});
      else rest.push_back(i);
    }
    for (const auto& blocks : set_partitions(rest)) {
      std::vector<int> sizes;
      for (const auto& b : blocks) sizes.push_back(static_cast<int>(b.size()));
      const double m = sizes.empty() ? 1.0 : monomial_direct(IntegerPartition(sizes), w);
      if (m == 0) continue;
      SetPartition all = blocks;
      all.insert(all.end(), singles.begin(), singles.end());
      total += Complex(wa * m) * block_symmetrizer_sum(all, copies, h.d, true);
    }
  }
  return total;
}

DenseOperator exact_tensor_average(const HardInstance& h, Side side, int copies) {
  RegisterShape::uniform(static_cast<std::size_t>(copies), h.d);
  return exact_tensor_average_sum(h, side, copies).to_dense(h.d);
}

PermutationSum tensor_average_gap_sum(const MomentPair& pair, std::size_t d, int copies) {
  const HardInstance h{pair.k, d, 0.0, 1.0, pair};
  auto diff = exact_tensor_average_sum(h, Side::P, copies) - exact_tensor_average_sum(h, Side::Q, copies);
  if (copies <= pair.k && diff.max_abs() > 1e-12)
    throw std::logic_error("tensor averages differ below k+1 copies");
  if (copies == pair.k + 1 && (diff - Complex(pair.gap) * delta_sum(copies, d)).max_abs() > 1e-12)
    throw std::logic_error("tensor average gap is not gap * Delta");
  return diff;
}

DenseOperator tensor_average_gap(const MomentPair& pair, std::size_t d, int copies) {
  RegisterShape::uniform(static_cast<std::size_t>(copies), d);
  auto diff = tensor_average_gap_sum(pair, d, copies).to_dense(d);
  if (copies <= pair.k && diff.matrix().norm() > 1e-10)
    throw std::logic_error("tensor averages differ below k+1 copies");
  if (copies == pair.k + 1) {
    auto target = delta_operator(copies, d);
    target *= pair.gap;
    if (frobenius_distance(diff, target) > 1e-10)
      throw std::logic_error("tensor average gap is not gap * Delta");
  }
  return diff;
}

double concentration_bound(const HaarAssembledEnsemble& e, double operator_norm, double delta) {
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const double m = e.m();
  const double c = 18 * std::pow(std::numbers::pi, 3) * m * m * operator_norm * operator_norm;
  double s = 0;
  for (int r = 0; r < e.m(); ++r) {
    const double ar = e.a(r);
    if (ar == 0) continue;
    s += std::exp(-static_cast<double>(e.local_dims()[static_cast<std::size_t>(r)]) *
                  delta * delta / (c * ar * ar));
  }
  return 2 * s;
}

double indistinguishability_bound(const HaarAssembledEnsemble& e, int rounds) {
  if (rounds < 1) throw DomainError("rounds must be >= 1");
  const double t = rounds;
  double s = 0;
  for (int r = 0; r < e.m(); ++r) {
    const double dr = static_cast<double>(e.local_dims()[static_cast<std::size_t>(r)]);
    s += t * (t - 1) * e.a(r) * e.a(r) / dr + t * e.a_prime(r) / dr;
  }
  return s;
}

double hard_instance_round_bound(const HardInstance& h, Side side, int rounds) {
  const auto w = h.weights(side);
  double s1 = 0, s2 = 0;
  for (double x : w) {
    s1 += x;
    s2 += x * x;
  }
  const double k = h.k, t = rounds, d = static_cast<double>(h.d);
  return (k * k * t * t - k * t) / d * s2 + t * k / d * s1;
}

double two_ensembles_bound(int k, std::size_t d, double weight_sum, int rounds) {
  const double x = static_cast<double>(k) * rounds * weight_sum;
  return 2.0 / static_cast<double>(d) * (x * x + x);
}

DensityOperator ReducedRounding::dense_state() const {
  RealVector av(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) av(static_cast<Eigen::Index>(i)) = a[i];
  Matrix s = q * av.asDiagonal() * q.adjoint();
  return DensityOperator(RegisterShape({static_cast<std::size_t>(q.rows())}), (s + s.adjoint()) * 0.5);
}

DensityOperator ReducedRounding::dense_target(const std::vector<PureState>& samples) const {
  const auto n = q.rows();
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * samples[i].amplitudes() * samples[i].amplitudes().adjoint();
  return DensityOperator(RegisterShape({static_cast<std::size_t>(n)}), (s + s.adjoint()) * 0.5);
}

ReducedRounding round_to_spectrum_reduced(const std::vector<PureState>& samples,
                                          const std::vector<double>& a) {
  const std::size_t m = a.size();
  if (samples.size() != m) throw ShapeError("need one sample per spectrum entry");
  if (m == 0) throw DomainError("empty spectrum");
  const std::size_t d = samples[0].dim();
  if (m > d) throw DomainError("spectrum longer than the dimension");
  double total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] < 0 || (i > 0 && a[i] > a[i - 1] + 1e-15)) throw DomainError("spectrum must be nonnegative and nonincreasing");
    total += a[i];
  }
  if (std::abs(total - 1) > 1e-12) throw DomainError("spectrum must sum to 1");
  Matrix psi(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) psi.col(static_cast<Eigen::Index>(i)) = samples[i].amplitudes();
  Eigen::HouseholderQR<Matrix> qr(psi);
  const auto mi = static_cast<Eigen::Index>(m);
  Matrix q = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(d), mi);
  Matrix r = qr.matrixQR().topRows(mi).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < mi; ++i) {
    const Complex rii = r(i, i);
    if (std::abs(rii) == 0) continue;
    const Complex ph = rii / std::abs(rii);
    q.col(i) *= ph;
    r.row(i) *= std::conj(ph);
  }
  RealVector av(mi);
  for (Eigen::Index i = 0; i < mi; ++i) av(i) = a[static_cast<std::size_t>(i)];
  const Matrix diff = r * av.asDiagonal() * r.adjoint() - Matrix(av.asDiagonal());
  const double dist = 0.5 * eigh(diff).values.cwiseAbs().sum();
  return {std::move(q), std::move(r), a, dist};
}

RoundingResult round_to_spectrum(const std::vector<PureState>& samples,
                                 const std::vector<double>& a) {
  auto red = round_to_spectrum_reduced(samples, a);
  return {red.dense_state(), red.distance};
}

ObservableSplit split_observable(const DenseOperator& o) {
  const std::size_t d = o.dim();
  if (d % 2 != 0 || d < 4) throw DomainError("split_observable needs even dimension >= 4");
  if (o.hermiticity_error() > 1e-8) throw DomainError("observable must be Hermitian");
  const auto es = eigh(o.matrix());
  if (es.values.cwiseAbs().maxCoeff() > 1 + 1e-9) throw DomainError("observable norm exceeds 1");
  const auto half = static_cast<Eigen::Index>(d / 2), n = static_cast<Eigen::Index>(d);
  const double tn = es.values.cwiseAbs().sum();
  // values ascending: bottom half = [0, half), top half = [half, n)
  const double top = es.values.tail(half).sum(), bottom = es.values.head(half).sum();
  const auto nonneg = (es.values.array() >= 0).count();
  bool take_top;
  if (nonneg >= half) take_top = top >= tn / 4;
  else take_top = !(-bottom >= tn / 4);
  ObservableSplit s;
  s.trace_norm = tn;
  const Eigen::Index start = take_top ? half : 0, other = take_top ? 0 : half;
  s.basis = es.vectors.middleCols(start, half);
  s.complement = es.vectors.middleCols(other, n - half);
  s.chosen_trace = es.values.segment(start, half).sum();
  const RegisterShape hs({d / 2});
  s.o0 = DenseOperator(hs, Matrix(es.values.segment(start, half).cast<Complex>().asDiagonal()));
  s.o1 = DenseOperator(hs, Matrix(es.values.segment(other, n - half).cast<Complex>().asDiagonal()));
  return s;
}

}  // namespace replica
