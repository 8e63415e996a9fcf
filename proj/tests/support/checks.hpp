#pragma once

// Shared verification helpers: the componentwise error budget for kernels
// that regroup per-row sums, and small conveniences for comparing outputs.

#include <cmath>
#include <cstring>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "merbit/csr.hpp"

namespace merbit::testing {

// Componentwise agreement bound between a regrouped row sum and the
// sequential reference: 4 * eps * (row length) * max|A| * max|x|.  Empty
// rows must agree exactly.
template <typename T>
struct ToleranceBound {
  std::vector<double> per_row;

  ToleranceBound(const CsrMatrix<T>& a, std::span<const T> x) {
    double max_a = 0.0;
    for (T v : a.values) {
      max_a = std::max(max_a, std::abs(static_cast<double>(v)));
    }
    double max_x = 0.0;
    for (T v : x) {
      max_x = std::max(max_x, std::abs(static_cast<double>(v)));
    }
    const double eps = std::numeric_limits<T>::epsilon();
    per_row.resize(static_cast<std::size_t>(a.n_rows));
    for (index_t r = 0; r < a.n_rows; ++r) {
      const auto len = static_cast<double>(
          a.row_offsets[static_cast<std::size_t>(r) + 1] -
          a.row_offsets[static_cast<std::size_t>(r)]);
      per_row[static_cast<std::size_t>(r)] = 4.0 * eps * len * max_a * max_x;
    }
  }
};

// Index of the first row where |got - want| exceeds the bound, or -1.
template <typename T>
index_t first_violation(const ToleranceBound<T>& bound,
                        std::span<const T> want, std::span<const T> got) {
  for (std::size_t r = 0; r < want.size(); ++r) {
    const double diff =
        std::abs(static_cast<double>(got[r]) - static_cast<double>(want[r]));
    if (!(diff <= bound.per_row[r])) return static_cast<index_t>(r);
  }
  return -1;
}

template <typename T>
bool bitwise_equal(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i], &b[i], sizeof(T)) != 0) return false;
  }
  return true;
}

}  // namespace merbit::testing
