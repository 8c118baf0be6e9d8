#pragma once

#include <cstdint>
#include <random>

#include "exbasis/types.hpp"

namespace exbasis {

/// splitmix64 finalizer, used to derive independent sub-seeds so that
/// parallel work items stay deterministic regardless of schedule.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

/// Uniform point on the unit sphere of R^dim.
inline RVec random_real_unit(std::mt19937_64& gen, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RVec v(dim);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(gen);
    norm2 = v.squaredNorm();
  } while (norm2 < 1e-12);
  return v / std::sqrt(norm2);
}

/// Uniform point on the unit sphere of C^n (= R^{2n}).
inline CVec random_complex_unit(std::mt19937_64& gen, int n) {
  RVec x = random_real_unit(gen, 2 * n);
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(x[2 * i], x[2 * i + 1]);
  return v;
}

}  // namespace exbasis
