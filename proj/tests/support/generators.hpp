#pragma once

// Structured random matrices for fuzzing the kernels.  Six shapes chosen to
// stress different path geometries: dense-ish uniform scatter, skewed
// power-law rows, narrow bands, one enormous row, no nonzeros at all, and
// mostly-empty row ranges.  All draws come from a seeded generator so any
// failure reproduces from its (shape, seed) pair alone.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "merbit/csr.hpp"
#include "merbit/random.hpp"

namespace merbit::testing {

enum class MatrixShape {
  uniform,
  power_law_rows,
  banded,
  single_dense_row,
  all_empty,
  mostly_empty_rows,
};

inline constexpr MatrixShape kAllShapes[] = {
    MatrixShape::uniform,          MatrixShape::power_law_rows,
    MatrixShape::banded,           MatrixShape::single_dense_row,
    MatrixShape::all_empty,        MatrixShape::mostly_empty_rows,
};

inline const char* shape_name(MatrixShape s) {
  switch (s) {
    case MatrixShape::uniform: return "uniform";
    case MatrixShape::power_law_rows: return "power_law_rows";
    case MatrixShape::banded: return "banded";
    case MatrixShape::single_dense_row: return "single_dense_row";
    case MatrixShape::all_empty: return "all_empty";
    case MatrixShape::mostly_empty_rows: return "mostly_empty_rows";
  }
  return "?";
}

// Duplicate coordinates collapse during normalization, so the realized
// nonzero count is at most target_nnz.
inline CooTriples random_matrix(MatrixShape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](index_t bound) {
    return static_cast<index_t>(rng() % static_cast<std::uint64_t>(bound));
  };
  CooTriples coo;
  coo.n_rows = 1 + pick(512);
  coo.n_cols = 1 + pick(512);
  index_t target_nnz = pick(std::min<index_t>(20000, coo.n_rows * coo.n_cols));

  auto value = [&] { return uniform_in(rng, -1.0, 1.0); };

  switch (shape) {
    case MatrixShape::uniform: {
      for (index_t k = 0; k < target_nnz; ++k) {
        coo.entries.push_back({pick(coo.n_rows), pick(coo.n_cols), value()});
      }
      break;
    }
    case MatrixShape::power_law_rows: {
      // Row lengths ~ 1/(rank+1): a few hubs, many near-empty rows.
      double weight_sum = 0.0;
      for (index_t r = 0; r < coo.n_rows; ++r) {
        weight_sum += 1.0 / static_cast<double>(r + 1);
      }
      for (index_t r = 0; r < coo.n_rows && target_nnz > 0; ++r) {
        const double share =
            (1.0 / static_cast<double>(r + 1)) / weight_sum;
        index_t len = static_cast<index_t>(
            std::llround(share * static_cast<double>(target_nnz)));
        len = std::min(len, coo.n_cols);
        for (index_t k = 0; k < len; ++k) {
          coo.entries.push_back({r, pick(coo.n_cols), value()});
        }
      }
      break;
    }
    case MatrixShape::banded: {
      const index_t half_band = 1 + pick(8);
      for (index_t r = 0; r < coo.n_rows; ++r) {
        const index_t center =
            coo.n_cols <= 1
                ? 0
                : (r * (coo.n_cols - 1)) / std::max<index_t>(coo.n_rows - 1, 1);
        for (index_t d = -half_band; d <= half_band; ++d) {
          const index_t c = center + d;
          if (c >= 0 && c < coo.n_cols) {
            coo.entries.push_back({r, c, value()});
          }
        }
      }
      break;
    }
    case MatrixShape::single_dense_row: {
      const index_t hub = pick(coo.n_rows);
      target_nnz = std::min<index_t>(20000, coo.n_cols * 4);
      for (index_t k = 0; k < target_nnz; ++k) {
        coo.entries.push_back({hub, pick(coo.n_cols), value()});
      }
      // A sprinkle elsewhere so the hub is not the whole matrix.
      for (index_t k = 0; k < std::min<index_t>(coo.n_rows, 32); ++k) {
        coo.entries.push_back({pick(coo.n_rows), pick(coo.n_cols), value()});
      }
      break;
    }
    case MatrixShape::all_empty: {
      break;  // dimensions only
    }
    case MatrixShape::mostly_empty_rows: {
      // ~10% of rows populated, the rest stay empty.
      const index_t live_rows = std::max<index_t>(1, coo.n_rows / 10);
      for (index_t k = 0; k < target_nnz; ++k) {
        const index_t r =
            (pick(live_rows) * std::max<index_t>(coo.n_rows / live_rows, 1)) %
            coo.n_rows;
        coo.entries.push_back({r, pick(coo.n_cols), value()});
      }
      break;
    }
  }
  return coo;
}

}  // namespace merbit::testing
