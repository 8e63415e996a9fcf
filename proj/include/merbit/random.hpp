#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "merbit/types.hpp"

namespace merbit {

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output.  std::uniform_real_distribution is implementation-defined; this
// mapping is not, so seeded vectors are reproducible everywhere.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Deterministic dense test vector with entries in [lo, hi).
template <typename T>
std::vector<T> seed_test_vector(index_t n, double lo, double hi,
                                std::uint64_t seed) {
  if (n < 0) throw dimension_error("seed_test_vector: negative length");
  std::mt19937_64 rng(seed);
  std::vector<T> v(static_cast<std::size_t>(n));
  for (auto& e : v) e = static_cast<T>(uniform_in(rng, lo, hi));
  return v;
}

}  // namespace merbit
