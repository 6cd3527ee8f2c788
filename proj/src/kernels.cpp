#include "replica/kernels.hpp"

#include <algorithm>

namespace replica::kernels {

IndexMap basis_image(const std::vector<int>& images, std::size_t d) {
  const std::size_t n = images.size();
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t p = n; p-- > 1;) stride[p - 1] = stride[p] * d;
  std::size_t total = n == 0 ? 1 : stride[0] * d;
  IndexMap map(total, 0);
  std::vector<std::size_t> digit(n, 0);
  // odometer over x in increasing order, updating y incrementally
  std::size_t y = 0;
  for (std::size_t x = 0; x < total; ++x) {
    map[x] = y;
    for (std::size_t p = n; p-- > 0;) {
      const std::size_t s = stride[static_cast<std::size_t>(images[p])];
      if (++digit[p] < d) {
        y += s;
        break;
      }
      digit[p] = 0;
      y -= (d - 1) * s;
    }
  }
  return map;
}

namespace {

struct TraceOffsets {
  std::vector<std::size_t> kept, traced;
};

TraceOffsets trace_offsets(const std::vector<std::size_t>& dims,
                           const std::vector<std::size_t>& keep) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t p = n; p-- > 1;) stride[p - 1] = stride[p] * dims[p];
  std::vector<bool> is_kept(n, false);
  for (auto r : keep) is_kept[r] = true;
  TraceOffsets t{{0}, {0}};
  // digits are appended most-significant first within each group
  for (std::size_t p = 0; p < n; ++p) {
    auto& v = is_kept[p] ? t.kept : t.traced;
    std::vector<std::size_t> next;
    next.reserve(v.size() * dims[p]);
    for (auto base : v)
      for (std::size_t a = 0; a < dims[p]; ++a) next.push_back(base + a * stride[p]);
    v = std::move(next);
  }
  return t;
}

}  // namespace

namespace serial {

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
  for (Eigen::Index j = 0; j < ac; ++j)
    for (Eigen::Index i = 0; i < ar; ++i)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& a, const std::vector<std::size_t>& dims,
                     const std::vector<std::size_t>& keep) {
  const auto off = trace_offsets(dims, keep);
  const auto dk = static_cast<Eigen::Index>(off.kept.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index j = 0; j < dk; ++j)
    for (Eigen::Index i = 0; i < dk; ++i) {
      Complex s = 0;
      for (auto t : off.traced)
        s += a(static_cast<Eigen::Index>(off.kept[i] + t),
               static_cast<Eigen::Index>(off.kept[j] + t));
      out(i, j) = s;
    }
  return out;
}

Matrix apply_left(const IndexMap& map, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (std::size_t x = 0; x < map.size(); ++x)
      out(static_cast<Eigen::Index>(map[x]), c) = a(static_cast<Eigen::Index>(x), c);
  return out;
}

Matrix apply_right(const Matrix& a, const IndexMap& map) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t x = 0; x < map.size(); ++x)
    out.col(static_cast<Eigen::Index>(x)) = a.col(static_cast<Eigen::Index>(map[x]));
  return out;
}

Complex permutation_trace(const Matrix& o, const IndexMap& map) {
  Complex s = 0;
  for (std::size_t x = 0; x < map.size(); ++x)
    s += o(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(map[x]));
  return s;
}

Matrix permutation_combination(const std::vector<Complex>& coeffs,
                               const std::vector<IndexMap>& maps) {
  const auto n = static_cast<Eigen::Index>(maps.empty() ? 0 : maps[0].size());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t s = 0; s < maps.size(); ++s) {
    if (coeffs[s] == Complex(0)) continue;
    for (Eigen::Index x = 0; x < n; ++x)
      out(static_cast<Eigen::Index>(maps[s][x]), x) += coeffs[s];
  }
  return out;
}

}  // namespace serial

namespace omp {

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
#pragma omp parallel for collapse(2) schedule(static)
  for (Eigen::Index j = 0; j < ac; ++j)
    for (Eigen::Index i = 0; i < ar; ++i)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& a, const std::vector<std::size_t>& dims,
                     const std::vector<std::size_t>& keep) {
  const auto off = trace_offsets(dims, keep);
  const auto dk = static_cast<Eigen::Index>(off.kept.size());
  Matrix out = Matrix::Zero(dk, dk);
#pragma omp parallel for collapse(2) schedule(static)
  for (Eigen::Index j = 0; j < dk; ++j)
    for (Eigen::Index i = 0; i < dk; ++i) {
      Complex s = 0;
      for (auto t : off.traced)
        s += a(static_cast<Eigen::Index>(off.kept[i] + t),
               static_cast<Eigen::Index>(off.kept[j] + t));
      out(i, j) = s;
    }
  return out;
}

Matrix apply_left(const IndexMap& map, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  const auto n = static_cast<std::ptrdiff_t>(map.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (std::ptrdiff_t x = 0; x < n; ++x)
      out(static_cast<Eigen::Index>(map[x]), c) = a(x, c);
  return out;
}

Matrix apply_right(const Matrix& a, const IndexMap& map) {
  Matrix out(a.rows(), a.cols());
  const auto n = static_cast<std::ptrdiff_t>(map.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x)
    out.col(x) = a.col(static_cast<Eigen::Index>(map[x]));
  return out;
}

Complex permutation_trace(const Matrix& o, const IndexMap& map) {
  double re = 0, im = 0;
  const auto n = static_cast<std::ptrdiff_t>(map.size());
#pragma omp parallel for reduction(+ : re, im) schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    const Complex v = o(x, static_cast<Eigen::Index>(map[x]));
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

Matrix permutation_combination(const std::vector<Complex>& coeffs,
                               const std::vector<IndexMap>& maps) {
  const auto n = static_cast<Eigen::Index>(maps.empty() ? 0 : maps[0].size());
  Matrix out = Matrix::Zero(n, n);
  // each thread owns a column range, so no two threads touch an entry
#pragma omp parallel for schedule(static)
  for (Eigen::Index x = 0; x < n; ++x)
    for (std::size_t s = 0; s < maps.size(); ++s)
      if (coeffs[s] != Complex(0))
        out(static_cast<Eigen::Index>(maps[s][x]), x) += coeffs[s];
  return out;
}

}  // namespace omp

}  // namespace replica::kernels
