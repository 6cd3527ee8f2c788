#include <chrono>
#include <cstdio>

#include <omp.h>

#include "replica/kernels.hpp"
#include "replica/permutation.hpp"
#include "replica/random.hpp"

using namespace replica;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

volatile double sink = 0;

}  // namespace

int main() {
  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial ms", "omp ms", "speedup");
  Rng rng(1);
  auto row = [](const char* name, double s, double o) {
    std::printf("%-28s %12.3f %12.3f %8.2f\n", name, 1e3 * s, 1e3 * o, s / o);
  };

  const Matrix a = complex_gaussian(64, 64, rng), b = complex_gaussian(16, 16, rng);
  row("kron 64x16", best_of(5, [&] { sink = kernels::serial::kron(a, b).norm(); }),
      best_of(5, [&] { sink = kernels::omp::kron(a, b).norm(); }));

  const Matrix big = complex_gaussian(729, 729, rng);
  const std::vector<std::size_t> dims{3, 3, 3, 3, 3, 3};
  row("partial_trace 3^6 keep 2", best_of(5, [&] { sink = kernels::serial::partial_trace(big, dims, {0, 3}).norm(); }),
      best_of(5, [&] { sink = kernels::omp::partial_trace(big, dims, {0, 3}).norm(); }));

  const auto map = Permutation::cycle(6).basis_map(3);
  row("apply_left cycle 3^6", best_of(5, [&] { sink = kernels::serial::apply_left(map, big).norm(); }),
      best_of(5, [&] { sink = kernels::omp::apply_left(map, big).norm(); }));
  row("apply_right cycle 3^6", best_of(5, [&] { sink = kernels::serial::apply_right(big, map).norm(); }),
      best_of(5, [&] { sink = kernels::omp::apply_right(big, map).norm(); }));
  row("permutation_trace 3^6", best_of(20, [&] { sink = std::abs(kernels::serial::permutation_trace(big, map)); }),
      best_of(20, [&] { sink = std::abs(kernels::omp::permutation_trace(big, map)); }));

  std::vector<Complex> coeffs;
  std::vector<kernels::IndexMap> maps;
  for (const auto& p : all_permutations(5)) {
    coeffs.emplace_back(std::normal_distribution<>(0, 1)(rng), 0);
    maps.push_back(p.basis_map(3));
  }
  row("permutation_combination S5 d3",
      best_of(3, [&] { sink = kernels::serial::permutation_combination(coeffs, maps).norm(); }),
      best_of(3, [&] { sink = kernels::omp::permutation_combination(coeffs, maps).norm(); }));
}
