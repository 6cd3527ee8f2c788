#include "replica/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "replica/combinatorics.hpp"
#include "replica/moment_match.hpp"
#include "replica/protocols.hpp"

namespace replica::checks {

namespace {

double uniform(Rng& rng, double a = 0, double b = 1) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

DenseOperator herm(std::size_t d, Rng& rng) {
  return DenseOperator(RegisterShape({d}), random_hermitian(d, rng, uniform(rng, 0.2, 3.0)));
}

Matrix random_psd(std::size_t d, Rng& rng) {
  const auto rank = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(d)));
  const Matrix g = complex_gaussian(d, rank, rng);
  Matrix p = g * g.adjoint();
  return p / p.trace().real();
}

}  // namespace

double norm_facts(int instances, const SeedPath& path) {
  double worst = -1e300;
  auto upd = [&](double lhs, double rhs) { worst = std::max(worst, lhs - rhs); };
  for (int i = 0; i < instances; ++i) {
    Rng rng = path.child(static_cast<std::uint64_t>(i)).rng();
    const auto d1 = static_cast<std::size_t>(uniform_int(rng, 2, 4));
    const auto d2 = static_cast<std::size_t>(uniform_int(rng, 2, 3));
    const auto a = herm(d1, rng), b = herm(d1, rng), c = herm(d2, rng);
    const auto na = norms(a), nb = norms(b), nc = norms(c);
    upd(na.operator_norm, na.frobenius);
    upd(na.frobenius, na.trace_norm);
    upd(std::abs((a * b).trace()), na.trace_norm * nb.operator_norm);
    upd(norms(tensor(a, c)).trace_norm, na.trace_norm * nc.trace_norm);
    // pure-state facts
    const auto psi = sample_haar_state(d1, rng), phi = sample_haar_state(d1, rng);
    const auto diff = psi.projector() - phi.projector();
    const double one = norms(diff).trace_norm;
    upd(one, 2 * (psi.amplitudes() - phi.amplitudes()).norm());
    const int k = uniform_int(rng, 2, 3);
    const auto pk = tensor_power(psi.projector(), static_cast<std::size_t>(k)) -
                    tensor_power(phi.projector(), static_cast<std::size_t>(k));
    upd(norms(pk).trace_norm, k * one);
    // unitary invariance of the spectrum
    const Matrix u = sample_haar_unitary(d1, rng);
    const auto rot = eigh(u * a.matrix() * u.adjoint()).values;
    worst = std::max(worst, (rot - eigh(a.matrix()).values).cwiseAbs().maxCoeff() - 1e-10);
  }
  return worst;
}

double permutation_homomorphism(int pairs, const SeedPath& path) {
  double worst = 0;
  for (int i = 0; i < pairs; ++i) {
    Rng rng = path.child(static_cast<std::uint64_t>(i)).rng();
    const int n = uniform_int(rng, 1, 5);
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 3));
    const auto total = factorial(n);
    const auto a = Permutation::unrank(n, std::uniform_int_distribution<std::size_t>(0, total - 1)(rng));
    const auto b = Permutation::unrank(n, std::uniform_int_distribution<std::size_t>(0, total - 1)(rng));
    const auto lhs = permutation_operator(a.compose(b), d);
    const auto rhs = permutation_operator(a, d) * permutation_operator(b, d);
    worst = std::max(worst, (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff());
  }
  for (int n = 1; n <= 5; ++n)
    for (std::size_t d : {2, 3})
      for (const auto& p : all_permutations(n)) {
        const double tr = permutation_operator(p, d).trace().real();
        worst = std::max(worst, std::abs(tr - std::pow(static_cast<double>(d), p.cycle_count())));
      }
  return worst;
}

namespace {

// qudits laid out P_1 | P_2 | ..., with P_t = I_{t,1} | I_{t,2} | ...
double inequality_margin(const std::vector<std::vector<int>>& sizes, std::size_t d,
                         const std::vector<Matrix>& g) {
  const int t_count = static_cast<int>(sizes.size());
  const int m = static_cast<int>(sizes[0].size());
  std::vector<std::vector<std::vector<int>>> cells(static_cast<std::size_t>(t_count));
  int next = 0;
  for (int t = 0; t < t_count; ++t)
    for (int r = 0; r < m; ++r) {
      std::vector<int> c;
      for (int j = 0; j < sizes[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)]; ++j) c.push_back(next++);
      cells[static_cast<std::size_t>(t)].push_back(c);
    }
  const int n = next;
  SetPartition q;
  for (int r = 0; r < m; ++r) {
    std::vector<int> block;
    for (int t = 0; t < t_count; ++t)
      for (int e : cells[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)]) block.push_back(e);
    if (!block.empty()) q.push_back(block);
  }
  Matrix joint = Matrix::Identity(1, 1);
  for (const auto& gt : g) joint = kernels::serial::kron(joint, gt);
  const DenseOperator gj(RegisterShape::uniform(static_cast<std::size_t>(n), d), joint);
  const double lhs = block_symmetrizer_sum(q, n, d, false).trace_with(gj).real();
  double rhs = 1;
  for (int t = 0; t < t_count; ++t) {
    SetPartition local;
    int base = -1;
    for (const auto& c : cells[static_cast<std::size_t>(t)])
      if (!c.empty()) {
        if (base < 0) base = c.front();
        break;
      }
    int nt = 0;
    for (const auto& c : cells[static_cast<std::size_t>(t)]) nt += static_cast<int>(c.size());
    if (nt == 0) continue;
    for (const auto& c : cells[static_cast<std::size_t>(t)]) {
      std::vector<int> b;
      for (int e : c) b.push_back(e - base);
      if (!b.empty()) local.push_back(b);
    }
    const DenseOperator gt(RegisterShape::uniform(static_cast<std::size_t>(nt), d), g[static_cast<std::size_t>(t)]);
    rhs *= block_symmetrizer_sum(local, nt, d, false).trace_with(gt).real();
  }
  return rhs - lhs;
}

}  // namespace

PermInequality permutation_inequality(int instances, const SeedPath& path) {
  PermInequality out;
  out.instances = instances;
  std::vector<double> margins(static_cast<std::size_t>(instances));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < instances; ++i) {
    Rng rng = path.child(static_cast<std::uint64_t>(i)).rng();
    const int t_count = uniform_int(rng, 1, 3), m = uniform_int(rng, 1, 2);
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 3));
    std::vector<std::vector<int>> sizes;
    int total = 0;
    do {
      sizes.assign(static_cast<std::size_t>(t_count), std::vector<int>(static_cast<std::size_t>(m), 0));
      total = 0;
      for (auto& row : sizes)
        for (auto& s : row) {
          s = uniform_int(rng, 0, 2);
          total += s;
        }
    } while (total == 0 || total > 6);
    std::vector<Matrix> g;
    for (const auto& row : sizes) {
      const int nt = std::accumulate(row.begin(), row.end(), 0);
      if (nt == 0) continue;
      g.push_back(random_psd(static_cast<std::size_t>(std::pow(static_cast<double>(d), nt)), rng));
    }
    std::vector<std::vector<int>> nonempty;
    for (const auto& row : sizes)
      if (std::accumulate(row.begin(), row.end(), 0) > 0) nonempty.push_back(row);
    margins[static_cast<std::size_t>(i)] = inequality_margin(nonempty, d, g);
  }
  for (double v : margins) out.max_violation = std::max(out.max_violation, v);

  // tr((G_1 (x) ... (x) G_T) S_T) >= prod tr(G_t)
  Rng rng = path.child(1u << 20).rng();
  for (int rep = 0; rep < 50; ++rep) {
    const int t_count = uniform_int(rng, 1, 4);
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 3));
    std::vector<Matrix> g;
    std::vector<std::vector<int>> sizes;
    for (int t = 0; t < t_count; ++t) {
      g.push_back(random_psd(d, rng));
      sizes.push_back({1});
    }
    out.full_symmetrizer_violation = std::max(out.full_symmetrizer_violation, inequality_margin(sizes, d, g));
  }
  // tr((G_1 (x) G_2) S_{a+b}) >= tr(G_1 S_a) tr(G_2 S_b)
  for (int rep = 0; rep < 50; ++rep) {
    const int a = uniform_int(rng, 1, 3), b = uniform_int(rng, 1, 3);
    const auto d = static_cast<std::size_t>(a + b > 4 ? 2 : uniform_int(rng, 2, 3));
    std::vector<Matrix> g{random_psd(static_cast<std::size_t>(std::pow(static_cast<double>(d), a)), rng),
                          random_psd(static_cast<std::size_t>(std::pow(static_cast<double>(d), b)), rng)};
    out.two_block_violation = std::max(out.two_block_violation, inequality_margin({{a}, {b}}, d, g));
  }
  return out;
}

double haar_moment_error(int n, std::size_t d, int samples, const SeedPath& path) {
  const auto dim = static_cast<Eigen::Index>(std::pow(static_cast<double>(d), n));
  Matrix acc = Matrix::Zero(dim, dim);
  Rng rng = path.rng();
  for (int s = 0; s < samples; ++s) {
    const auto psi = sample_haar_state(d, rng);
    Vector v = psi.amplitudes();
    for (int j = 1; j < n; ++j) v = tensor(v, psi.amplitudes());
    acc.noalias() += v * v.adjoint();
  }
  acc /= static_cast<double>(samples);
  return (acc - symmetrizer(n, d, true).matrix()).norm();
}

Tail haar_overlap_tail(std::size_t d, double delta, int samples, const SeedPath& path) {
  Rng rng = path.rng();
  int hits = 0;
  for (int s = 0; s < samples; ++s)
    if (std::norm(sample_haar_state(d, rng).amplitudes()(0)) >= delta) ++hits;
  return {static_cast<double>(hits) / samples, 2 * std::exp(-static_cast<double>(d) * delta / 2)};
}

double multinomial_identity_error(int max_n, int max_m) {
  double worst = 0;
  for (int m = 1; m <= max_m; ++m) {
    std::vector<double> p(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i)] = 1.0 + i;
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= z;
    for (int n = 0; n <= max_n; ++n) {
      // all count vectors with sum n
      std::vector<std::vector<int>> outcomes;
      std::vector<int> cur;
      std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == m - 1) {
          cur.push_back(left);
          outcomes.push_back(cur);
          cur.pop_back();
          return;
        }
        for (int x = 0; x <= left; ++x) {
          cur.push_back(x);
          rec(i + 1, left - x);
          cur.pop_back();
        }
      };
      rec(0, n);
      auto prob = [&](const std::vector<int>& x) {
        double lp = std::lgamma(n + 1.0);
        double pr = 1;
        for (int i = 0; i < m; ++i) {
          lp -= std::lgamma(x[static_cast<std::size_t>(i)] + 1.0);
          pr *= std::pow(p[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]);
        }
        return std::exp(lp) * pr;
      };
      // exponent vectors with entries <= 3
      std::vector<int> c(static_cast<std::size_t>(m), 0);
      std::function<void(int)> rc = [&](int i) {
        if (i == m) {
          double brute = 0;
          for (const auto& x : outcomes) {
            double f = 1;
            for (int j = 0; j < m; ++j)
              f *= falling_factorial(x[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(j)]);
            brute += prob(x) * f;
          }
          worst = std::max(worst, std::abs(brute - multinomial_expectation(n, p, c)));
          return;
        }
        for (int e = 0; e <= 3; ++e) {
          c[static_cast<std::size_t>(i)] = e;
          rc(i + 1);
        }
      };
      rc(0);
      for (int i = 0; i < m; ++i) {
        double mean = 0, sq = 0;
        for (const auto& x : outcomes) {
          const double xi = x[static_cast<std::size_t>(i)];
          mean += prob(x) * xi;
          sq += prob(x) * xi * xi;
        }
        worst = std::max(worst, std::abs(mean - multinomial_mean(n, p, i)));
        worst = std::max(worst, std::abs(sq - multinomial_second_moment(n, p, i)));
        for (int j = 0; j < m; ++j) {
          if (j == i) continue;
          double cross = 0;
          for (const auto& x : outcomes)
            cross += prob(x) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
          worst = std::max(worst, std::abs(cross - multinomial_cross_moment(n, p, i, j)));
        }
      }
    }
  }
  return worst;
}

MonomialCheck monomial_coefficients(int max_t, const SeedPath& path) {
  MonomialCheck out{0, 0};
  Rng rng = path.rng();
  for (int t = 1; t <= max_t; ++t) {
    for (const auto& lambda : integer_partitions(t)) {
      const auto e = monomial_in_powersum_basis(lambda);
      const int l = lambda.length();
      const std::int64_t want = ((l - 1) % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(factorial(l - 1));
      const auto it = e.find(IntegerPartition({t}));
      const std::int64_t got = it == e.end() ? 0 : it->second;
      if (got != want) ++out.mismatches;
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> x(static_cast<std::size_t>(uniform_int(rng, l, l + 2)));
        for (auto& v : x) v = uniform(rng, -1, 1);
        const double direct = monomial_direct(lambda, x);
        const double viaps = evaluate_powersum_expansion(e, x);
        out.evaluation_error = std::max(out.evaluation_error,
                                        std::abs(direct - viaps) / std::max(1.0, std::abs(direct)));
      }
    }
  }
  return out;
}

int stirling_identity_mismatches(int max_k) {
  int bad = 0;
  for (int k = 1; k <= max_k; ++k) {
    std::int64_t s = 0;
    for (int l = 1; l <= k; ++l)
      s += ((l - 1) % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(factorial(l - 1)) *
           static_cast<std::int64_t>(stirling2(k, l));
    if (s != (k == 1 ? 1 : 0)) ++bad;
    // x^k = sum_l S(k,l) x^{falling l}
    for (int x = 1; x <= k; ++x) {
      double rhs = 0;
      for (int l = 0; l <= k; ++l) rhs += static_cast<double>(stirling2(k, l)) * falling_factorial(x, l);
      if (rhs != std::pow(static_cast<double>(x), k)) ++bad;
    }
    std::uint64_t count = set_partitions(k).size();
    if (count != bell(k)) ++bad;
  }
  return bad;
}

ChebyshevCheck chebyshev_pairs(int max_k) {
  ChebyshevCheck out;
  for (int k = 1; k <= max_k; ++k) {
    const auto pair = moment_matched_pair(k);
    std::vector<double> res;
    try {
      res = verify_moments(pair, k + 1);
    } catch (const std::logic_error&) {
      out.moment_residual = std::max(out.moment_residual, 1.0);
      continue;
    }
    for (int i = 0; i < k; ++i) out.moment_residual = std::max(out.moment_residual, std::abs(res[static_cast<std::size_t>(i)]));
    const double want = 2.0 / (std::pow(2.0, k) * std::pow(k + 1.0, k));
    out.gap_error = std::max({out.gap_error, std::abs(res[static_cast<std::size_t>(k)] - want), std::abs(pair.gap - want)});
    out.min_nonzero_margin = std::min(out.min_nonzero_margin, pair.min_nonzero() - 2 / std::pow(k + 1.0, 3));
    for (double x : pair.p)
      out.polynomial_error = std::max(out.polynomial_error, std::abs(pair.polynomial(x) - pair.delta) / pair.delta);
    for (double x : pair.q)
      out.polynomial_error = std::max(out.polynomial_error, std::abs(pair.polynomial(x) + pair.delta) / pair.delta);
    const auto ep = elementary_from_power_sums(pair.p, k), eq = elementary_from_power_sums(pair.q, k);
    for (int i = 0; i < k; ++i)
      out.elementary_error = std::max(out.elementary_error, std::abs(ep[static_cast<std::size_t>(i)] - eq[static_cast<std::size_t>(i)]));
  }
  auto diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
  };
  const auto p1 = moment_matched_pair(1), p2 = moment_matched_pair(2);
  out.small_case_error = std::max({diff(p1.p, {1, 0}), diff(p1.q, {0.5, 0.5}), diff(p2.p, {2.0 / 3, 1.0 / 6, 1.0 / 6}),
                                   diff(p2.q, {0.5, 0.5, 0})});
  return out;
}

double delta_closed_form_error(int max_k, const std::vector<std::size_t>& dims) {
  double worst = 0;
  for (std::size_t d : dims) {
    for (int k = 1; k <= max_k; ++k) {
      if (std::pow(static_cast<double>(d), k) > 4096) continue;
      const auto n = static_cast<Eigen::Index>(std::pow(static_cast<double>(d), k));
      Matrix ref = Matrix::Zero(n, n);
      for (const auto& blocks : set_partitions(k)) {
        const int l = static_cast<int>(blocks.size());
        Matrix prod = Matrix::Identity(n, n);
        for (const auto& b : blocks) {
          // symmetrizer of one block by explicit permutation operators
          std::vector<int> images(static_cast<std::size_t>(k));
          std::iota(images.begin(), images.end(), 0);
          auto target = b;
          Matrix sb = Matrix::Zero(n, n);
          do {
            for (std::size_t j = 0; j < b.size(); ++j) images[static_cast<std::size_t>(b[j])] = target[j];
            sb += permutation_operator(Permutation(images), d).matrix();
          } while (std::next_permutation(target.begin(), target.end()));
          prod = prod * sb / rising_factorial(static_cast<double>(d), static_cast<int>(b.size()));
        }
        ref += std::pow(-1.0, l - 1) * static_cast<double>(factorial(l - 1)) * prod;
      }
      worst = std::max(worst, (delta_operator(k, d).matrix() - ref).norm());
    }
    // k=2 closed form (1 + SWAP)/(d(d+1)) - 1/d^2
    const auto swap = permutation_operator(Permutation::transposition(2, 0, 1), d).matrix();
    const auto id = Matrix::Identity(swap.rows(), swap.cols());
    const double dd = static_cast<double>(d);
    const Matrix closed = (id + swap) / (dd * (dd + 1)) - id / (dd * dd);
    worst = std::max(worst, (delta_operator(2, d).matrix() - closed).norm());
    worst = std::max(worst, std::abs(delta_operator(2, d).trace().real()));
    worst = std::max(worst, std::abs((delta_operator(2, d).matrix() * swap).trace().real() - (1 - 1 / dd)));
  }
  return worst;
}

StructuredObservable StructuredObservable::random(int k, std::size_t d, int terms, Rng& rng) {
  StructuredObservable o{k, d, {}, {}, {}};
  double z = 0;
  for (int j = 0; j < terms; ++j) {
    const double u = uniform(rng, 0.1, 1.0);
    o.c.push_back(uniform(rng) < 0.5 ? -u : u);
    z += u;
    o.perms.push_back(Permutation::unrank(k, std::uniform_int_distribution<std::size_t>(0, factorial(k) - 1)(rng)));
    std::vector<Matrix> f;
    for (int i = 0; i < k; ++i) {
      const double alpha = uniform(rng, -1, 1);
      const auto n = static_cast<Eigen::Index>(d);
      f.push_back(alpha * Matrix::Identity(n, n) + (1 - std::abs(alpha)) * random_hermitian(d, rng, 1.0));
    }
    o.factors.push_back(std::move(f));
  }
  for (auto& c : o.c) c /= z;
  return o;
}

PermutationSum StructuredObservable::traces() const {
  PermutationSum t(k);
  for (const auto& pi : all_permutations(k)) {
    const auto inv = pi.inverse();
    Complex s = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      // tr(X_j pi^{-1}), X_j = (A pi_j + pi_j^{-1} A)/2
      s += 0.5 * c[j] *
           (product_permutation_trace(factors[j], perms[j].compose(inv)) +
            product_permutation_trace(factors[j], inv.compose(perms[j].inverse())));
    }
    t.add(pi, s);
  }
  return t;
}

DenseOperator StructuredObservable::dense() const {
  const auto shape = RegisterShape::uniform(static_cast<std::size_t>(k), d);
  DenseOperator out(shape);
  for (std::size_t j = 0; j < c.size(); ++j) {
    Matrix a = factors[j][0];
    for (int i = 1; i < k; ++i) a = kernels::serial::kron(a, factors[j][static_cast<std::size_t>(i)]);
    const DenseOperator ad(shape, a);
    auto x = apply_permutation_right(ad, perms[j]);
    x += apply_permutation_left(perms[j].inverse(), ad);
    x *= 0.5 * c[j];
    out += x;
  }
  return out;
}

OComponent o_component(int k, std::size_t d, int count, const SeedPath& path) {
  OComponent out;
  out.bound = std::pow(k, k - 1) * static_cast<double>(factorial(k)) / static_cast<double>(d);
  const auto delta = delta_sum(k, d);
  for (int i = 0; i < count; ++i) {
    Rng rng = path.child(static_cast<std::uint64_t>(i)).rng();
    const auto o = StructuredObservable::random(k, d, 3, rng);
    const auto traces = o.traces();
    const auto dec = twirl_from_traces(traces, d);
    Complex w = 0;
    for (const auto& [p, c] : dec.coefficients.terms())
      if (p.is_circular()) w += c;
    // tr(O Delta) = sum_sigma Delta_sigma tr(O sigma) = sum_sigma Delta_sigma b_{sigma^{-1}}
    Complex t = 0;
    for (const auto& [sigma, coeff] : delta.terms())
      t += coeff * traces.coefficient(sigma.inverse());
    const double dev = std::abs(w - t);
    out.max_deviation = std::max(out.max_deviation, dev);
    out.mean_deviation += dev / count;
  }
  return out;
}

HardMoments hard_instance_moments(int k, std::size_t d) {
  const auto h = HardInstance::with_p0(k, d, 0.3);
  const auto eq = exact_tensor_average(h, Side::P, k) - exact_tensor_average(h, Side::Q, k);
  const auto diff = exact_tensor_average(h, Side::P, k + 1) - exact_tensor_average(h, Side::Q, k + 1);
  const auto target = delta_operator(k + 1, d);
  const double gap = std::pow(h.scale, k + 1) * h.pair.gap;
  return {eq.matrix().norm(), (diff.matrix() - gap * target.matrix()).norm()};
}

std::vector<double> rounding_distances(std::size_t d, const std::vector<double>& a, int trials,
                                       const SeedPath& path) {
  std::vector<double> out(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < trials; ++i) {
    Rng rng = path.child(static_cast<std::uint64_t>(i)).rng();
    std::vector<PureState> s;
    for (std::size_t r = 0; r < a.size(); ++r) s.push_back(sample_haar_state(d, rng));
    out[static_cast<std::size_t>(i)] = round_to_spectrum_reduced(s, a).distance;
  }
  return out;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double recursion_identity_error(int max_k, std::size_t max_d, int per_case, const SeedPath& path) {
  double worst = 0;
  RecursionOptions opts;
  opts.exact = true;
  for (int k = 1; k <= max_k; ++k)
    for (std::size_t d = 2; d <= max_d; ++d)
      for (int i = 0; i < per_case; ++i) {
        Rng rng = path.child(static_cast<std::uint64_t>(k * 1000 + d * 100 + i)).rng();
        const auto rho = random_density(d, rng);
        const DenseOperator o(RegisterShape({d}), random_hermitian(d, rng, 1.0));
        const auto r = recursive_estimate(rho, o, k, 0.05, rng, opts);
        worst = std::max(worst, std::abs(r.value - exact_power_expectation(rho, o, k + 1)));
        if (r.replica_width > (k + 2) / 2) worst = std::max(worst, 1.0);
      }
  return worst;
}

double concentration_sd(int k, std::size_t d, int samples, const SeedPath& path) {
  const auto h = HardInstance::raw(k, d);
  const auto w = h.weights(Side::P);
  RealVector diag(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < diag.size(); ++i) diag(i) = i % 2 == 0 ? 1.0 : -1.0;
  std::vector<double> f(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (int s = 0; s < samples; ++s) {
    Rng rng = path.child(static_cast<std::uint64_t>(s)).rng();
    double v = 0;
    for (double x : w) {
      const auto psi = sample_haar_state(d, rng);
      if (x > 0) v += x * (psi.amplitudes().cwiseAbs2().transpose() * diag)(0);
    }
    f[static_cast<std::size_t>(s)] = v;
  }
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / samples;
  double var = 0;
  for (double x : f) var += (x - mean) * (x - mean);
  return std::sqrt(var / (samples - 1));
}

}  // namespace replica::checks
