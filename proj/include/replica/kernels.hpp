#pragma once

#include <cstddef>
#include <vector>

#include "replica/linalg.hpp"

// Hot loops in two flavours: `serial` is the reference, `omp` the OpenMP
// version. Matrix-valued kernels agree exactly (same summation order per
// entry); the trace reduction agrees up to rounding.
namespace replica::kernels {

using IndexMap = std::vector<std::size_t>;

// x -> index of op(pi)|x>, where digit i of x is moved to position images[i].
IndexMap basis_image(const std::vector<int>& images, std::size_t d);

namespace serial {
Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace(const Matrix& a, const std::vector<std::size_t>& dims,
                     const std::vector<std::size_t>& keep);
// P * A and A * P for the permutation matrix P[map[x], x] = 1
Matrix apply_left(const IndexMap& map, const Matrix& a);
Matrix apply_right(const Matrix& a, const IndexMap& map);
// tr(O P) = sum_x O[x, map[x]]
Complex permutation_trace(const Matrix& o, const IndexMap& map);
// sum_s c_s P_s
Matrix permutation_combination(const std::vector<Complex>& coeffs,
                               const std::vector<IndexMap>& maps);
}  // namespace serial

namespace omp {
Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace(const Matrix& a, const std::vector<std::size_t>& dims,
                     const std::vector<std::size_t>& keep);
Matrix apply_left(const IndexMap& map, const Matrix& a);
Matrix apply_right(const Matrix& a, const IndexMap& map);
Complex permutation_trace(const Matrix& o, const IndexMap& map);
Matrix permutation_combination(const std::vector<Complex>& coeffs,
                               const std::vector<IndexMap>& maps);
}  // namespace omp

}  // namespace replica::kernels
