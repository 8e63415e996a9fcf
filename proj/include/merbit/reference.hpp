#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "merbit/csr.hpp"

namespace merbit {

// Row-by-row CSR product with a fixed left-to-right accumulation order.
// This is the numerical oracle every other kernel is measured against, so it
// stays deliberately free of blocking, reordering, or fused tricks.
template <typename T>
void spmv_csr_reference(const CsrMatrix<T>& a, std::span<const T> x,
                        std::span<T> y) {
  if (static_cast<index_t>(x.size()) != a.n_cols) {
    throw dimension_error("spmv: x has " + std::to_string(x.size()) +
                          " entries, matrix has " + std::to_string(a.n_cols) +
                          " columns");
  }
  if (static_cast<index_t>(y.size()) != a.n_rows) {
    throw dimension_error("spmv: y has " + std::to_string(y.size()) +
                          " entries, matrix has " + std::to_string(a.n_rows) +
                          " rows");
  }
  for (index_t r = 0; r < a.n_rows; ++r) {
    T sum = T(0);
    for (index_t k = a.row_offsets[static_cast<std::size_t>(r)];
         k < a.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      sum += a.values[static_cast<std::size_t>(k)] *
             x[static_cast<std::size_t>(
                 a.col_indices[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(r)] = sum;
  }
}

template <typename T>
std::vector<T> spmv_csr_reference(const CsrMatrix<T>& a,
                                  std::span<const T> x) {
  std::vector<T> y(static_cast<std::size_t>(a.n_rows), T(0));
  spmv_csr_reference(a, x, std::span<T>(y));
  return y;
}

// Componentwise accumulation-error allowance between any two correct SpMV
// evaluations of the same product: 4 * eps * (row nnz) * max|values| * max|x|
// for occupied rows, exactly zero for empty rows.
template <typename T>
std::vector<double> spmv_error_bound(const CsrMatrix<T>& a,
                                     std::span<const T> x) {
  double max_a = 0.0;
  for (T v : a.values) max_a = std::max(max_a, std::abs(static_cast<double>(v)));
  double max_x = 0.0;
  for (T v : x) max_x = std::max(max_x, std::abs(static_cast<double>(v)));
  const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
  std::vector<double> bound(static_cast<std::size_t>(a.n_rows), 0.0);
  for (index_t r = 0; r < a.n_rows; ++r) {
    const index_t len = a.row_offsets[static_cast<std::size_t>(r) + 1] -
                        a.row_offsets[static_cast<std::size_t>(r)];
    bound[static_cast<std::size_t>(r)] =
        4.0 * eps * static_cast<double>(len) * max_a * max_x;
  }
  return bound;
}

// Same product evaluated over normalized (row-major sorted, duplicate-free)
// triples.  Because the per-row addition sequence is identical to the CSR
// walk, the two references agree bitwise; this is asserted by tests.
template <typename T>
std::vector<T> spmv_coo_reference(const CooTriples& coo,
                                  std::span<const T> x) {
  if (static_cast<index_t>(x.size()) != coo.n_cols) {
    throw dimension_error("spmv: x has " + std::to_string(x.size()) +
                          " entries, matrix has " + std::to_string(coo.n_cols) +
                          " columns");
  }
  std::vector<T> y(static_cast<std::size_t>(coo.n_rows), T(0));
  for (const CooEntry& e : coo.entries) {
    y[static_cast<std::size_t>(e.row)] +=
        static_cast<T>(e.value) * x[static_cast<std::size_t>(e.col)];
  }
  return y;
}

}  // namespace merbit
