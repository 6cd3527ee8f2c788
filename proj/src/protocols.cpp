#include "replica/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/random/normal_distribution.hpp>

#include "replica/perm_algebra.hpp"

namespace replica {

void ReplicaBudget::use(int joint_copies, long long rounds) {
  if (joint_copies > width_)
    throw std::logic_error("joint measurement wider than the replica budget");
  max_used_ = std::max(max_used_, joint_copies);
  consumed_ += static_cast<long long>(joint_copies) * rounds;
}

std::vector<long long> sample_counts(const std::vector<double>& probs, long long shots, Rng& rng) {
  std::vector<long long> counts(probs.size(), 0);
  double mass = 0;
  for (double p : probs) mass += std::max(p, 0.0);
  long long left = shots;
  for (std::size_t i = 0; i + 1 < probs.size() && left > 0; ++i) {
    const double p = std::max(probs[i], 0.0);
    const double frac = mass > 0 ? std::min(1.0, p / mass) : 0.0;
    std::binomial_distribution<long long> b(left, frac);
    counts[i] = b(rng);
    left -= counts[i];
    mass -= p;
  }
  if (!probs.empty()) counts.back() += left;
  return counts;
}

double swap_test_plus_probability(const DensityOperator& rho, int m) {
  if (m < 1) throw DomainError("swap test needs m >= 1");
  return std::clamp(0.5 * (1 + rho.power_trace(m)), 0.0, 1.0);
}

DensityOperator swap_test_post_state(const DensityOperator& rho, int m, int sign) {
  const double t = rho.power_trace(m);
  const double norm = 1 + sign * t;
  if (norm < 1e-14) throw DegenerateOutcome("swap test branch has vanishing probability");
  Matrix s = (rho.matrix() + sign * matrix_power(rho, m).matrix()) / norm;
  return DensityOperator(rho.shape(), (s + s.adjoint()) * 0.5);
}

SwapTestOutcome swap_test(const DensityOperator& rho, int m, Rng& rng) {
  const double pp = swap_test_plus_probability(rho, m);
  std::bernoulli_distribution b(pp);
  const int sign = b(rng) ? 1 : -1;
  return {sign, swap_test_post_state(rho, m, sign), sign > 0 ? pp : 1 - pp};
}

SwapTestCircuit swap_test_circuit(const DensityOperator& rho, int m) {
  const std::size_t d = rho.dim();
  const auto joint = tensor_power(rho.op(), static_cast<std::size_t>(m));
  const auto pi = Permutation::cycle(m);
  // (1 +- P) X (1 +- P^dagger) / 4
  const auto px = apply_permutation_left(pi, joint);
  const auto xp = apply_permutation_right(joint, pi.inverse());
  const auto pxp = apply_permutation_right(px, pi.inverse());
  auto branch = [&](double s) {
    DenseOperator b = joint + pxp;
    b += DenseOperator(joint.shape(), s * (px.matrix() + xp.matrix()));
    b *= 0.25;
    return b;
  };
  const auto plus = branch(1), minus = branch(-1);
  const double pp = plus.trace().real();
  auto reduce = [&](const DenseOperator& b, double p) {
    auto r = partial_trace(b, {0});
    r *= 1.0 / p;
    return DensityOperator(r.hermitian_part());
  };
  (void)d;
  const double pm = minus.trace().real();
  return {pp, reduce(plus, pp),
          pm > 1e-14 ? reduce(minus, pm) : DensityOperator(rho)};
}

EstimateReport purity_moment_estimate(const DensityOperator& rho, int m, long long shots, Rng& rng) {
  if (shots < 1) throw DomainError("shots must be >= 1");
  const double pp = swap_test_plus_probability(rho, m);
  std::binomial_distribution<long long> b(shots, pp);
  const long long plus = b(rng);
  EstimateReport r;
  r.value = 2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0;
  r.shots_used = shots * m;
  r.replica_width = m;
  r.stderr_estimate = std::sqrt(std::max(0.0, 1 - r.value * r.value) / static_cast<double>(shots));
  return r;
}

DenseOperator lifted_observable(const DenseOperator& o, int k) {
  const std::size_t d = o.dim();
  auto a = tensor(o, DenseOperator::identity(RegisterShape::uniform(static_cast<std::size_t>(k), d)));
  a = DenseOperator(RegisterShape::uniform(static_cast<std::size_t>(k + 1), d), a.matrix());
  auto x = apply_permutation_right(a, Permutation::cycle(k + 1));
  return DenseOperator(x.shape(), (x.matrix() + x.matrix().adjoint()) * 0.5);
}

double exact_power_expectation(const DensityOperator& rho, const DenseOperator& o, int n) {
  return (matrix_power(rho, n).matrix() * o.matrix()).trace().real();
}

namespace {

bool proportional_to_identity(const DenseOperator& o, double* c) {
  const double scale = o.trace().real() / static_cast<double>(o.dim());
  const auto n = static_cast<Eigen::Index>(o.dim());
  const double err = (o.matrix() - scale * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  *c = scale;
  return err < 1e-12;
}

// eigenvalue statistics of c (pi + pi^dagger)/2 from cyclic Fourier modes
OutcomeDistribution fourier_outcomes(const DensityOperator& rho, double c, int n) {
  std::vector<double> tr_power(static_cast<std::size_t>(n + 1));
  for (int j = 1; j <= n; ++j) tr_power[static_cast<std::size_t>(j)] = rho.power_trace(j);
  OutcomeDistribution out;
  for (int j = 0; j < n; ++j) {
    double p = 0;
    for (int l = 0; l < n; ++l) {
      const int g = std::gcd(l, n);
      const double t = std::pow(tr_power[static_cast<std::size_t>(n / g)], g);
      p += std::cos(2 * std::numbers::pi * j * l / n) * t;
    }
    out.values.push_back(c * std::cos(2 * std::numbers::pi * j / n));
    out.probs.push_back(std::max(p / n, 0.0));
  }
  return out;
}

OutcomeDistribution eigenbasis_outcomes(const DensityOperator& rho, const DenseOperator& o, int k) {
  const auto h = lifted_observable(o, k);
  const auto es = eigh(h.matrix());
  const auto joint = tensor_power(rho.op(), static_cast<std::size_t>(k + 1));
  const Matrix pv = joint.matrix() * es.vectors;
  OutcomeDistribution out;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    out.values.push_back(es.values(i));
    out.probs.push_back(std::max(0.0, es.vectors.col(i).dot(pv.col(i)).real()));
  }
  return out;
}

// ancilla in |+>, controlled cycle, then X on the ancilla and O on register 1
OutcomeDistribution controlled_cycle_outcomes(const DensityOperator& rho, const DenseOperator& o, int k) {
  const auto es = eigh(o.matrix());
  const Matrix rn = matrix_power(rho, k + 1).matrix();
  OutcomeDistribution out;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const auto v = es.vectors.col(j);
    const double a = v.dot(rho.matrix() * v).real(), b = v.dot(rn * v).real();
    for (int s : {1, -1}) {
      out.values.push_back(s * es.values(j));
      out.probs.push_back(std::max(0.0, 0.5 * (a + s * b)));
    }
  }
  return out;
}

}  // namespace

OutcomeDistribution direct_outcomes(const DensityOperator& rho, const DenseOperator& o, int k,
                                    DirectBackend backend) {
  if (o.dim() != rho.dim()) throw ShapeError("observable and state dimensions differ");
  if (k < 1) throw DomainError("k must be >= 1");
  double c = 0;
  const bool scalar = proportional_to_identity(o, &c);
  const double dk = std::pow(static_cast<double>(rho.dim()), k + 1);
  if (backend == DirectBackend::Auto)
    backend = (scalar || dk <= 4096) ? DirectBackend::Eigenbasis : DirectBackend::ControlledCycle;
  if (backend == DirectBackend::ControlledCycle) return controlled_cycle_outcomes(rho, o, k);
  if (scalar) return fourier_outcomes(rho, c, k + 1);
  RegisterShape::uniform(static_cast<std::size_t>(k + 1), rho.dim());
  return eigenbasis_outcomes(rho, o, k);
}

EstimateReport direct_estimate(const DensityOperator& rho, const DenseOperator& o, int k,
                               long long shots, Rng& rng, DirectBackend backend) {
  if (shots < 1) throw DomainError("shots must be >= 1");
  if (norms(o).operator_norm > 1 + 1e-9) throw DomainError("observable operator norm exceeds 1");
  const auto dist = direct_outcomes(rho, o, k, backend);
  const auto counts = sample_counts(dist.probs, shots, rng);
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    sum += static_cast<double>(counts[i]) * dist.values[i];
    sq += static_cast<double>(counts[i]) * dist.values[i] * dist.values[i];
  }
  const double n = static_cast<double>(shots);
  EstimateReport r;
  r.value = sum / n;
  const double var = shots > 1 ? std::max(0.0, (sq - n * r.value * r.value) / (n - 1)) : 1.0;
  r.stderr_estimate = std::sqrt(var / n);
  r.shots_used = shots * (k + 1);
  r.replica_width = k + 1;
  return r;
}

ShadowSampler::ShadowSampler(const DensityOperator& rho) : d_(rho.dim()) {
  const auto& es = rho.spectrum();
  basis_ = es.vectors;
  double acc = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    acc += std::max(es.values(i), 0.0);
    cdf_.push_back(acc);
  }
  for (auto& c : cdf_) c /= acc;
}

Matrix ShadowSampler::accumulate(long long n, Rng& rng) const {
  // The measured basis vector v has density d <v|rho|v> w.r.t. the uniform
  // measure. In the eigenbasis this is a normalized complex Gaussian vector
  // whose j-th modulus squared is Gamma(2) instead of Exp(1), with j drawn
  // from the spectrum.
  const auto d = static_cast<Eigen::Index>(d_);
  boost::random::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix w = Matrix::Zero(d, d);
  Vector v(d);
  for (long long c = 0; c < n; ++c) {
    const double x = u(rng);
    Eigen::Index j = 0;
    while (j + 1 < d && cdf_[static_cast<std::size_t>(j)] < x) ++j;
    double norm2 = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = g(rng), im = g(rng);
      v(i) = Complex(re, im);
      norm2 += re * re + im * im;
    }
    const double a = std::abs(v(j));
    const double e1 = g(rng), e2 = g(rng);
    const double extra = e1 * e1 + e2 * e2;
    const double scale = a > 0 ? std::sqrt((a * a + extra) / (a * a)) : 1.0;
    v(j) *= scale;
    norm2 += extra;
    w.noalias() += (v * v.adjoint()) / norm2;
  }
  return basis_ * w * basis_.adjoint();
}

std::vector<double> shadow_group_estimates(const ShadowSampler& rho, const ShadowSampler& sigma,
                                           const DenseOperator& o, long long copies_each,
                                           int groups, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const double dp1 = static_cast<double>(d + 1);
  groups = static_cast<int>(std::max(1LL, std::min<long long>(groups, copies_each)));
  std::vector<double> est;
  for (int g = 0; g < groups; ++g) {
    const long long n = copies_each / groups + (g < copies_each % groups ? 1 : 0);
    const double nd = static_cast<double>(n);
    const Matrix r = rho.accumulate(n, rng) * (dp1 / nd) - Matrix::Identity(d, d);
    const Matrix s = sigma.accumulate(n, rng) * (dp1 / nd) - Matrix::Identity(d, d);
    est.push_back(2 * (r * s * o.matrix()).trace().real());
  }
  return est;
}

double median_of_means(std::vector<double> groups, double* stderr_out) {
  const std::size_t k = groups.size();
  if (stderr_out) {
    const double mean = std::accumulate(groups.begin(), groups.end(), 0.0) / static_cast<double>(k);
    double var = 0;
    for (double x : groups) var += (x - mean) * (x - mean);
    var = k > 1 ? var / static_cast<double>(k - 1) : 0.0;
    *stderr_out = 1.2533 * std::sqrt(var / static_cast<double>(k));
  }
  std::sort(groups.begin(), groups.end());
  return k % 2 ? groups[k / 2] : 0.5 * (groups[k / 2 - 1] + groups[k / 2]);
}

EstimateReport shadow_inner_product(const DensityOperator& rho, const DensityOperator& sigma,
                                    const DenseOperator& o, long long shots, Rng& rng, int groups) {
  if (rho.shape() != sigma.shape() || o.dim() != rho.dim())
    throw ShapeError("shadow inner product needs matching dimensions");
  if (shots < 1) throw DomainError("shots must be >= 1");
  if (norms(o).operator_norm > 1 + 1e-9) throw DomainError("observable operator norm exceeds 1");
  const ShadowSampler a(rho), b(sigma);
  EstimateReport r;
  r.value = median_of_means(shadow_group_estimates(a, b, o, shots, groups, rng), &r.stderr_estimate);
  r.shots_used = 2 * shots;
  r.replica_width = 1;
  return r;
}

namespace {

struct Term {
  double value;
  double var;
};

class Recursion {
 public:
  Recursion(const DensityOperator& rho, const DenseOperator& o, int width, Rng& rng,
            const RecursionOptions& opts)
      : rho_(rho), o_(o), rng_(rng), opts_(opts), budget_(width) {}

  // estimate of tr(rho^n O) with error target `target`
  Term term(int n, double target, int depth) {
    if (n >= 2 && n <= budget_.width()) return direct(n, target, depth);
    if (n == 2) return shadow_pair(1, 1, target, depth, nullptr);
    return reduce(n, target, depth);
  }

  EstimateReport report(const Term& t) const {
    EstimateReport r;
    r.value = t.value;
    r.stderr_estimate = std::sqrt(t.var);
    r.shots_used = budget_.copies_consumed();
    r.replica_width = budget_.max_used();
    r.breakdown = breakdown_;
    return r;
  }

 private:
  struct Tally {
    long long plus = 0, attempts = 0;
  };

  void check_total() {
    if (budget_.copies_consumed() > opts_.max_copies)
      throw RecursionBudgetError("copy budget exhausted", report(Term{0, 0}));
  }

  long long hoeffding_shots(double target) const {
    return static_cast<long long>(std::ceil(2 * std::log(2 / opts_.failure_probability) / (target * target)));
  }

  void record(std::string name, int depth, double value, double exact, double target, long long copies) {
    breakdown_.push_back({std::move(name), depth, value, exact, target, copies});
  }

  Term direct(int n, double target, int depth) {
    const double exact = exact_power_expectation(rho_, o_, n);
    if (opts_.exact) {
      budget_.use(n, 0);
      record("tr(rho^" + std::to_string(n) + " O) direct", depth, exact, exact, target, 0);
      return {exact, 0};
    }
    const long long shots = hoeffding_shots(target);
    const auto r = direct_estimate(rho_, o_, n - 1, shots, rng_);
    budget_.use(n, shots);
    check_total();
    record("tr(rho^" + std::to_string(n) + " O) direct", depth, r.value, exact, target, shots * n);
    return {r.value, r.stderr_estimate * r.stderr_estimate};
  }

  // prepares `copies` post-selected copies of rho_m by swap tests on m copies
  void prepare(int m, long long copies, Tally& t) {
    if (m == 1) {
      budget_.use(1, copies);
      return;
    }
    const double pp = swap_test_plus_probability(rho_, m);
    std::negative_binomial_distribution<long long> nb(copies, pp);
    const long long attempts = copies + nb(rng_);
    budget_.use(m, attempts);
    t.plus += copies;
    t.attempts += attempts;
    if (attempts > 3 * copies) throw RecursionBudgetError("swap-test preparation exceeded 3M attempts", report(Term{0, 0}));
    check_total();
  }

  // tr(rho^m) from preparation statistics, topped up to the Hoeffding count
  Term power_from_tally(int m, Tally t, double target, int depth) {
    const double exact = rho_.power_trace(m);
    if (opts_.exact || m == 1) return {exact, 0};
    const long long need = hoeffding_shots(target);
    if (t.attempts < need) {
      const long long extra = need - t.attempts;
      std::binomial_distribution<long long> b(extra, swap_test_plus_probability(rho_, m));
      t.plus += b(rng_);
      t.attempts += extra;
      budget_.use(m, extra);
    }
    const double f = static_cast<double>(t.plus) / static_cast<double>(t.attempts);
    const double v = 2 * f - 1;
    record("tr(rho^" + std::to_string(m) + ") swap counts", depth, v, exact, target, t.attempts * m);
    return {v, 4 * f * (1 - f) / static_cast<double>(t.attempts)};
  }

  DensityOperator post_state(int m) const {
    return m == 1 ? rho_ : swap_test_post_state(rho_, m, +1);
  }

  // tr(rho_a rho_b O) with rho_m = (rho + rho^m)/(1 + tr rho^m)
  Term shadow_pair(int a, int b, double target, int depth, std::map<int, Tally>* tallies) {
    const auto ra = post_state(a), rb = post_state(b);
    const double exact = (ra.matrix() * rb.matrix() * o_.matrix()).trace().real();
    const std::string name = "tr(rho_" + std::to_string(a) + " rho_" + std::to_string(b) + " O) shadow";
    if (opts_.exact) {
      budget_.use(std::max(a, b), 0);
      record(name, depth, exact, exact, target, 0);
      return {exact, 0};
    }
    std::map<int, Tally> local;
    auto& tl = tallies ? *tallies : local;
    const ShadowSampler sa(ra), sb(rb);
    const int groups = kShadowGroups;
    const long long pilot = opts_.shadow_pilot * groups;
    prepare(a, pilot, tl[a]);
    prepare(b, pilot, tl[b]);
    const auto pg = shadow_group_estimates(sa, sb, o_, pilot, groups, rng_);
    double mean = std::accumulate(pg.begin(), pg.end(), 0.0) / groups, var = 0;
    for (double x : pg) var += (x - mean) * (x - mean);
    // per-copy variance of the shadow estimate of 2 tr(...)
    const double per_copy = var / (groups - 1) * static_cast<double>(opts_.shadow_pilot);
    // median-of-means stderr ~ 1.2533 sqrt(v/n); value is half the shadow
    const double want = 1.2533 * 1.2533 * per_copy / (4 * target * target);
    const long long n = std::max(pilot, static_cast<long long>(std::ceil(want)));
    if (budget_.copies_consumed() + n * (a + b) > opts_.max_copies)
      throw RecursionBudgetError("copy budget exhausted for " + name, report(Term{0, 0}));
    prepare(a, n, tl[a]);
    prepare(b, n, tl[b]);
    double se = 0;
    const double v = 0.5 * median_of_means(shadow_group_estimates(sa, sb, o_, n, groups, rng_), &se);
    record(name, depth, v, exact, target, n * 2);
    return {v, 0.25 * se * se};
  }

  Term reduce(int n, double target, int depth) {
    const double t = target / 10;
    const int k1 = (n + 1) / 2, k2 = n / 2;
    std::map<int, Tally> tallies;
    if (n == 3) {
      // tr(rho^3 O) = (1 + tr rho^2) tr(rho_2 rho O) - tr(rho^2 O)
      const Term c = shadow_pair(2, 1, t, depth + 1, &tallies);
      const Term a = power_from_tally(2, tallies[2], t, depth + 1);
      const Term s = term(2, t, depth + 1);
      return {(1 + a.value) * c.value - s.value,
              c.value * c.value * a.var + (1 + a.value) * (1 + a.value) * c.var + s.var};
    }
    const Term c = shadow_pair(k1, k2, t, depth + 1, &tallies);
    Tally both;
    if (k1 == k2) {
      both.plus = tallies[k1].plus;
      both.attempts = tallies[k1].attempts;
    }
    const Term a1 = power_from_tally(k1, k1 == k2 ? both : tallies[k1], t, depth + 1);
    const Term a2 = k1 == k2 ? a1 : power_from_tally(k2, tallies[k2], t, depth + 1);
    const double f1 = 1 + a1.value, f2 = 1 + a2.value;
    Term out{f1 * f2 * c.value, f1 * f1 * f2 * f2 * c.var};
    if (k1 == k2) {
      out.var += std::pow(2 * f1 * c.value, 2) * a1.var;
    } else {
      out.var += f2 * f2 * c.value * c.value * a1.var + f1 * f1 * c.value * c.value * a2.var;
    }
    const Term s = term(2, t, depth + 1);
    out.value -= s.value;
    out.var += s.var;
    if (k1 == k2) {
      const Term u = term(k1 + 1, t, depth + 1);
      out.value -= 2 * u.value;
      out.var += 4 * u.var;
    } else {
      const Term u1 = term(k1 + 1, t, depth + 1), u2 = term(k2 + 1, t, depth + 1);
      out.value -= u1.value + u2.value;
      out.var += u1.var + u2.var;
    }
    return out;
  }

  const DensityOperator& rho_;
  const DenseOperator& o_;
  Rng& rng_;
  const RecursionOptions& opts_;
  ReplicaBudget budget_;
  std::vector<SubEstimate> breakdown_;
};

}  // namespace

EstimateReport recursive_estimate(const DensityOperator& rho, const DenseOperator& o, int k,
                                  double epsilon, Rng& rng, const RecursionOptions& opts) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (o.dim() != rho.dim()) throw ShapeError("observable and state dimensions differ");
  if (norms(o).operator_norm > 1 + 1e-9) throw DomainError("observable operator norm exceeds 1");
  const int width = (k + 2) / 2;
  RegisterShape::uniform(static_cast<std::size_t>(width), rho.dim());
  Recursion rec(rho, o, width, rng, opts);
  const Term t = rec.term(k + 1, epsilon, 0);
  return rec.report(t);
}

ProductPOVM::ProductPOVM(int registers, std::size_t local_dim, std::vector<Element> elements)
    : t_(registers), dloc_(local_dim), elements_(std::move(elements)) {
  for (const auto& e : elements_) {
    if (static_cast<int>(e.size()) != t_) throw ShapeError("POVM element has wrong register count");
    for (const auto& f : e) {
      if (f.rows() != static_cast<Eigen::Index>(dloc_)) throw ShapeError("POVM factor has wrong dimension");
      if (eigh(f).values.minCoeff() < -1e-10) throw DomainError("POVM factor is not PSD");
    }
  }
  const double err = completeness_error();
  if (err > 1e-9) throw DomainError("POVM elements do not sum to identity");
}

ProductPOVM ProductPOVM::product_of(const std::vector<std::vector<Matrix>>& per_register) {
  const int t = static_cast<int>(per_register.size());
  if (t == 0) throw ShapeError("POVM needs at least one register");
  const auto dloc = static_cast<std::size_t>(per_register[0][0].rows());
  for (const auto& reg : per_register) {
    Matrix s = Matrix::Zero(reg[0].rows(), reg[0].cols());
    for (const auto& f : reg) s += f;
    if ((s - Matrix::Identity(s.rows(), s.cols())).norm() > 1e-9)
      throw DomainError("per-register POVM is incomplete");
  }
  ProductPOVM p(t, dloc, {});
  p.per_register_ = per_register;
  return p;
}

std::size_t ProductPOVM::size() const {
  if (per_register_.empty()) return elements_.size();
  std::size_t n = 1;
  for (const auto& r : per_register_) n *= r.size();
  return n;
}

double ProductPOVM::completeness_error() const {
  if (!per_register_.empty()) {
    double worst = 0;
    for (const auto& reg : per_register_) {
      Matrix s = Matrix::Zero(reg[0].rows(), reg[0].cols());
      for (const auto& f : reg) s += f;
      worst = std::max(worst, (s - Matrix::Identity(s.rows(), s.cols())).norm());
    }
    return worst;
  }
  if (elements_.empty()) return 0;  // filled in by product_of
  const double total = std::pow(static_cast<double>(dloc_), t_);
  if (total > 4096) return 0;
  const auto n = static_cast<Eigen::Index>(total);
  Matrix s = Matrix::Zero(n, n);
  for (const auto& e : elements_) {
    Matrix f = e[0];
    for (int i = 1; i < t_; ++i) f = kernels::serial::kron(f, e[static_cast<std::size_t>(i)]);
    s += f;
  }
  return (s - Matrix::Identity(n, n)).norm();
}

std::vector<double> ProductPOVM::outcome_distribution(const DensityOperator& rho) const {
  if (rho.dim() != dloc_) throw ShapeError("state dimension differs from POVM local dimension");
  std::vector<double> out;
  if (!per_register_.empty()) {
    out = {1.0};
    for (const auto& reg : per_register_) {
      std::vector<double> next;
      for (double p : out)
        for (const auto& f : reg) next.push_back(p * (f * rho.matrix()).trace().real());
      out = std::move(next);
    }
    return out;
  }
  for (const auto& e : elements_) {
    double p = 1;
    for (const auto& f : e) p *= (f * rho.matrix()).trace().real();
    out.push_back(std::max(p, 0.0));
  }
  return out;
}

std::vector<double> ProductPOVM::outcome_distribution(const DenseOperator& joint) const {
  const double total = std::pow(static_cast<double>(dloc_), t_);
  if (static_cast<double>(joint.dim()) != total) throw ShapeError("joint state dimension mismatch");
  std::vector<Element> elems = elements_;
  if (!per_register_.empty()) {
    elems = {{}};
    for (const auto& reg : per_register_) {
      std::vector<Element> next;
      for (const auto& e : elems)
        for (const auto& f : reg) {
          auto x = e;
          x.push_back(f);
          next.push_back(std::move(x));
        }
      elems = std::move(next);
    }
  }
  std::vector<double> out;
  for (const auto& e : elems) {
    Matrix f = e[0];
    for (int i = 1; i < t_; ++i) f = kernels::serial::kron(f, e[static_cast<std::size_t>(i)]);
    out.push_back((f * joint.matrix()).trace().real());
  }
  return out;
}

std::size_t ProductPOVM::sample(const DensityOperator& rho, Rng& rng) const {
  const auto probs = outcome_distribution(rho);
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  return dist(rng);
}

ProductPOVM basis_povm(const Matrix& unitary) {
  std::vector<Matrix> elems;
  for (Eigen::Index i = 0; i < unitary.cols(); ++i)
    elems.push_back(unitary.col(i) * unitary.col(i).adjoint());
  return ProductPOVM::product_of({elems});
}

namespace {

double ensemble_power_mean(const HardInstance& h, Side side) {
  const int n = h.k + 1;
  const auto avg = exact_tensor_average_sum(h, side, n);
  return (PermutationSum::single(Permutation::cycle(n)) * avg).trace(h.d).real();
}

}  // namespace

Distinguisher::Distinguisher(HardInstance h)
    : h_(std::move(h)), mean_p_(ensemble_power_mean(h_, Side::P)), mean_q_(ensemble_power_mean(h_, Side::Q)) {}

DistinguishResult Distinguisher::run(long long samples_budget, const Strategy& s, const SeedPath& path) const {
  Rng coin = path.child(0).rng();
  std::bernoulli_distribution fair(0.5);
  DistinguishResult r{fair(coin) ? Side::P : Side::Q, Side::P, false, 0.5 * (mean_p_ + mean_q_)};
  const auto sample = sample_state(h_, r.truth, path.child(1));
  Rng rng = path.child(2).rng();
  if (s.kind == Strategy::Kind::SwapKPlus1) {
    const long long rounds = samples_budget / (h_.k + 1);
    if (rounds > 0) {
      const auto id = DenseOperator::identity(sample.state.shape());
      r.statistic = direct_estimate(sample.state, id, h_.k, rounds, rng).value;
    }
    r.verdict = std::abs(r.statistic - mean_p_) <= std::abs(r.statistic - mean_q_) ? Side::P : Side::Q;
  } else {
    if (samples_budget >= s.povm->registers()) {
      const auto outcome = s.povm->sample(sample.state, rng);
      r.statistic = static_cast<double>(outcome);
      r.verdict = s.rule(outcome);
    }
  }
  r.success = r.verdict == r.truth;
  return r;
}

DistinguishResult distinguish(long long samples_budget, const HardInstance& h, const Strategy& s,
                              const SeedPath& path) {
  return Distinguisher(h).run(samples_budget, s, path);
}

std::vector<Strategy> one_replica_battery(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Strategy> out;
  auto basis_strategy = [&](std::string name, const Matrix& u, std::function<Side(std::size_t)> rule) {
    Strategy s;
    s.kind = Strategy::Kind::Povm;
    s.name = std::move(name);
    s.povm = basis_povm(u);
    s.rule = std::move(rule);
    out.push_back(std::move(s));
  };
  basis_strategy("computational-half", Matrix::Identity(n, n),
                 [d](std::size_t o) { return o < d / 2 ? Side::P : Side::Q; });
  Matrix f(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      f(a, b) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                           2 * std::numbers::pi * static_cast<double>(a * b) / static_cast<double>(d));
  basis_strategy("fourier-parity", f, [](std::size_t o) { return o % 2 == 0 ? Side::P : Side::Q; });
  basis_strategy("haar-basis-half", sample_haar_unitary(d, rng),
                 [d](std::size_t o) { return o < d / 2 ? Side::P : Side::Q; });
  {
    const Matrix u = sample_haar_unitary(d, rng);
    const Matrix proj = u.leftCols(n / 2) * u.leftCols(n / 2).adjoint();
    Strategy s;
    s.kind = Strategy::Kind::Povm;
    s.name = "random-projector";
    s.povm = ProductPOVM::product_of({{proj, Matrix::Identity(n, n) - proj}});
    s.rule = [](std::size_t o) { return o == 0 ? Side::P : Side::Q; };
    out.push_back(std::move(s));
  }
  {
    const Matrix a = complex_gaussian(d, 2 * d, rng);
    const auto es = eigh(a * a.adjoint());
    const Matrix inv_sqrt = es.vectors * es.values.cwiseSqrt().cwiseInverse().asDiagonal() * es.vectors.adjoint();
    std::vector<Matrix> elems;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      const Vector v = inv_sqrt * a.col(i);
      elems.push_back(v * v.adjoint());
    }
    Strategy s;
    s.kind = Strategy::Kind::Povm;
    s.name = "random-frame-mod3";
    s.povm = ProductPOVM::product_of({elems});
    s.rule = [](std::size_t o) { return o % 3 == 0 ? Side::P : Side::Q; };
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace replica
