#pragma once

#include <vector>

#include "merbit/csr.hpp"
#include "merbit/random.hpp"

namespace merbit {

// Canonical 8x8, 34-nonzero walkthrough matrix.  Values are 1..34 in storage
// order (exact in every precision); row 1 is empty; the mean degree is 4.25.
// Row lengths are [5, 0, 5, 3, 7, 6, 6, 2].  Partitioned at omega=4,
// sigma=4 its merge path splits into 3 tiles and 11 lanes, and the published
// walkthrough's lane offsets and step flags are reproduced exactly by the
// tile builder (see the format tests for the two start entries where the
// published figure disagrees with its own partitioning rule).
template <typename T = double>
CsrMatrix<T> walkthrough_fixture() {
  CsrMatrix<T> a;
  a.n_rows = 8;
  a.n_cols = 8;
  a.row_offsets = {0, 5, 5, 10, 13, 20, 26, 32, 34};
  a.col_indices = {
      0, 2, 3, 5, 7,           // row 0
                               // row 1 empty
      1, 2, 4, 6, 7,           // row 2
      0, 3, 6,                 // row 3
      0, 1, 2, 4, 5, 6, 7,     // row 4
      0, 1, 3, 4, 5, 7,        // row 5
      1, 2, 3, 4, 6, 7,        // row 6
      3, 5,                    // row 7
  };
  a.values.resize(34);
  for (int k = 0; k < 34; ++k) a.values[static_cast<std::size_t>(k)] = T(k + 1);
  return a;
}

// Five-point Laplacian on a grid_dim x grid_dim grid: 4 on the diagonal, -1
// toward each neighbour.  Symmetric positive definite.
template <typename T = double>
CsrMatrix<T> five_point_laplacian(index_t grid_dim) {
  CooTriples coo;
  coo.n_rows = grid_dim * grid_dim;
  coo.n_cols = coo.n_rows;
  for (index_t i = 0; i < grid_dim; ++i) {
    for (index_t j = 0; j < grid_dim; ++j) {
      const index_t v = i * grid_dim + j;
      coo.entries.push_back({v, v, 4.0});
      if (i > 0) coo.entries.push_back({v, v - grid_dim, -1.0});
      if (i + 1 < grid_dim) coo.entries.push_back({v, v + grid_dim, -1.0});
      if (j > 0) coo.entries.push_back({v, v - 1, -1.0});
      if (j + 1 < grid_dim) coo.entries.push_back({v, v + 1, -1.0});
    }
  }
  return coo_to_csr<T>(coo);
}

// Strongly connected directed graph: a Hamiltonian ring i -> i+1 (mod n)
// plus extra_edges random chords, as an adjacency pattern (all values 1).
template <typename T = double>
CsrMatrix<T> ring_with_chords(index_t n, index_t extra_edges,
                              std::uint64_t seed) {
  CooTriples coo;
  coo.n_rows = n;
  coo.n_cols = n;
  for (index_t i = 0; i < n; ++i) {
    coo.entries.push_back({i, (i + 1) % n, 1.0});
  }
  std::mt19937_64 rng(seed);
  for (index_t e = 0; e < extra_edges; ++e) {
    const index_t from = static_cast<index_t>(rng() % static_cast<std::uint64_t>(n));
    const index_t to = static_cast<index_t>(rng() % static_cast<std::uint64_t>(n));
    if (from == to) continue;  // no self-loops from the chord pass
    coo.entries.push_back({from, to, 1.0});
  }
  return coo_to_csr<T>(coo);  // duplicate chords collapse, values irrelevant
}

// Singular 2x2 system diag(1, 0): any right-hand side with a component on
// the null space has no solution, which drives the stabilized recurrence
// into a clean zero-denominator breakdown.
template <typename T = double>
CsrMatrix<T> singular_diagonal_fixture() {
  CsrMatrix<T> a;
  a.n_rows = 2;
  a.n_cols = 2;
  a.row_offsets = {0, 1, 1};
  a.col_indices = {0};
  a.values = {T(1)};
  return a;
}

// Single-row matrix 1 x width with `width` nonzeros: the long-row extreme
// that drives every full tile onto the marked fast path.
template <typename T = double>
CsrMatrix<T> single_dense_row_fixture(index_t width, std::uint64_t seed) {
  CsrMatrix<T> a;
  a.n_rows = 1;
  a.n_cols = width;
  a.row_offsets = {0, width};
  a.col_indices.resize(static_cast<std::size_t>(width));
  a.values.resize(static_cast<std::size_t>(width));
  std::mt19937_64 rng(seed);
  for (index_t k = 0; k < width; ++k) {
    a.col_indices[static_cast<std::size_t>(k)] = k;
    // Positive, well-conditioned data: this fixture pins an accuracy bound.
    a.values[static_cast<std::size_t>(k)] =
        static_cast<T>(uniform_in(rng, 0.5, 1.5));
  }
  return a;
}

}  // namespace merbit
