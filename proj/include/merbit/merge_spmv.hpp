#pragma once

#include <algorithm>
#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "merbit/csr.hpp"
#include "merbit/merge_path.hpp"
#include "merbit/thread_pool.hpp"

namespace merbit {

// Merge-path SpMV with all partitioning done at multiply time: every lane
// binary-searches its own diagonal, walks sigma steps directly against the
// row-offset array, stores each row it closes, and leaves its trailing
// partial in a per-lane carry slot folded in ascending lane order.  No
// descriptors, no staged products — deliberately disjoint machinery from the
// precomputed-metadata kernel so the two can vouch for each other.
template <typename T>
void spmv_merge_runtime(const CsrMatrix<T>& a, std::span<const T> x,
                        std::span<T> y, const SimtConfig& c,
                        ThreadPool* pool = nullptr) {
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
  const index_t total = a.nnz() + a.n_rows;
  if (total == 0) return;
  const index_t lanes = (total + c.sigma - 1) / c.sigma;
  const std::span<const index_t> offsets(a.row_offsets);

  // Every row is closed by exactly one Down step, so the store pass
  // initializes all of y; no zero fill is needed.
  std::vector<std::pair<index_t, T>> carry(static_cast<std::size_t>(lanes));

  auto run_lane = [&](index_t j) {
    const index_t diag = j * c.sigma;
    const index_t steps = std::min<index_t>(c.sigma, total - diag);
    PathCoord p = merge_search(offsets, diag, a.n_rows, a.nnz());
    T sum = T(0);
    for (index_t k = 0; k < steps; ++k) {
      if (p.y < a.n_rows &&
          p.x < offsets[static_cast<std::size_t>(p.y) + 1]) {
        sum += a.values[static_cast<std::size_t>(p.x)] *
               x[static_cast<std::size_t>(
                   a.col_indices[static_cast<std::size_t>(p.x)])];
        ++p.x;
      } else {
        assert(p.y < a.n_rows);
        y[static_cast<std::size_t>(p.y)] = sum;
        sum = T(0);
        ++p.y;
      }
    }
    carry[static_cast<std::size_t>(j)] = {p.y, sum};
  };

  // Lanes are grouped into fixed-size chunks purely to keep pool hand-off
  // cheap; the chunking cannot affect results (stores hit disjoint rows).
  constexpr index_t kLanesPerChunk = 512;
  const index_t chunks = (lanes + kLanesPerChunk - 1) / kLanesPerChunk;
  parallel_for_index(pool, chunks, [&](index_t chunk) {
    const index_t first = chunk * kLanesPerChunk;
    const index_t last = std::min<index_t>(first + kLanesPerChunk, lanes);
    for (index_t j = first; j < last; ++j) run_lane(j);
  });

  for (index_t j = 0; j < lanes; ++j) {
    if (carry[static_cast<std::size_t>(j)].first < a.n_rows) {
      y[static_cast<std::size_t>(carry[static_cast<std::size_t>(j)].first)] +=
          carry[static_cast<std::size_t>(j)].second;
    }
  }
}

template <typename T>
std::vector<T> spmv_merge_runtime(const CsrMatrix<T>& a, std::span<const T> x,
                                  const SimtConfig& c,
                                  ThreadPool* pool = nullptr) {
  std::vector<T> y(static_cast<std::size_t>(a.n_rows), T(0));
  spmv_merge_runtime(a, x, std::span<T>(y), c, pool);
  return y;
}

}  // namespace merbit
