#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "merbit/types.hpp"

namespace merbit {

// One coordinate-format entry.  Values are kept in double until a CSR matrix
// is materialized at a concrete precision, so duplicate summation happens
// once, in the widest type.
struct CooEntry {
  index_t row = 0;
  index_t col = 0;
  double value = 0.0;

  friend bool operator==(const CooEntry&, const CooEntry&) = default;
};

struct CooTriples {
  index_t n_rows = 0;
  index_t n_cols = 0;
  std::vector<CooEntry> entries;
};

template <typename T>
struct CsrMatrix {
  index_t n_rows = 0;
  index_t n_cols = 0;
  std::vector<index_t> row_offsets;  // n_rows + 1, nondecreasing, [0] == 0
  std::vector<index_t> col_indices;  // sorted strictly increasing within a row
  std::vector<T> values;

  index_t nnz() const { return static_cast<index_t>(col_indices.size()); }
};

// Sorts row-major and sums duplicates.  Entry order in the result is the
// canonical order every consumer (reference kernels, CSR conversion,
// round-trip tests) relies on.
inline CooTriples normalize_coo(CooTriples coo) {
  for (const CooEntry& e : coo.entries) {
    if (e.row < 0 || e.row >= coo.n_rows || e.col < 0 || e.col >= coo.n_cols) {
      throw dimension_error("coo entry (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ") outside " +
                            std::to_string(coo.n_rows) + "x" +
                            std::to_string(coo.n_cols));
    }
  }
  std::stable_sort(coo.entries.begin(), coo.entries.end(),
                   [](const CooEntry& a, const CooEntry& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<CooEntry> merged;
  merged.reserve(coo.entries.size());
  for (const CooEntry& e : coo.entries) {
    if (!merged.empty() && merged.back().row == e.row &&
        merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  coo.entries = std::move(merged);
  return coo;
}

template <typename T>
CsrMatrix<T> coo_to_csr(const CooTriples& coo) {
  CooTriples norm = normalize_coo(coo);
  CsrMatrix<T> a;
  a.n_rows = norm.n_rows;
  a.n_cols = norm.n_cols;
  a.row_offsets.assign(static_cast<std::size_t>(norm.n_rows) + 1, 0);
  a.col_indices.reserve(norm.entries.size());
  a.values.reserve(norm.entries.size());
  for (const CooEntry& e : norm.entries) {
    ++a.row_offsets[static_cast<std::size_t>(e.row) + 1];
    a.col_indices.push_back(e.col);
    a.values.push_back(static_cast<T>(e.value));
  }
  for (index_t r = 0; r < norm.n_rows; ++r) {
    a.row_offsets[static_cast<std::size_t>(r) + 1] +=
        a.row_offsets[static_cast<std::size_t>(r)];
  }
  return a;
}

template <typename T>
CooTriples csr_to_coo(const CsrMatrix<T>& a) {
  CooTriples coo;
  coo.n_rows = a.n_rows;
  coo.n_cols = a.n_cols;
  coo.entries.reserve(static_cast<std::size_t>(a.nnz()));
  for (index_t r = 0; r < a.n_rows; ++r) {
    for (index_t k = a.row_offsets[static_cast<std::size_t>(r)];
         k < a.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      coo.entries.push_back({r, a.col_indices[static_cast<std::size_t>(k)],
                             static_cast<double>(
                                 a.values[static_cast<std::size_t>(k)])});
    }
  }
  return coo;
}

struct DegreeStats {
  double mean_degree = 0.0;   // nnz / n_rows
  bool low_degree = false;    // mean_degree <= the supplied slice threshold
  index_t max_degree = 0;
  index_t empty_rows = 0;
};

// Degree-based workload classification: a matrix is "low degree" when its
// mean row length does not exceed the default slice length for the target
// precision (callers pass select_sigma(precision)).
template <typename T>
DegreeStats degree_stats(const CsrMatrix<T>& a, int sigma_threshold) {
  if (a.n_rows <= 0) {
    throw dimension_error("degree stats of a matrix with no rows");
  }
  DegreeStats s;
  s.mean_degree = static_cast<double>(a.nnz()) / static_cast<double>(a.n_rows);
  s.low_degree = s.mean_degree <= sigma_threshold;
  for (index_t r = 0; r < a.n_rows; ++r) {
    const index_t d = a.row_offsets[static_cast<std::size_t>(r) + 1] -
                      a.row_offsets[static_cast<std::size_t>(r)];
    s.max_degree = std::max(s.max_degree, d);
    if (d == 0) ++s.empty_rows;
  }
  return s;
}

}  // namespace merbit
