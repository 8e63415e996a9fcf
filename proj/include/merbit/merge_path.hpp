#pragma once

#include <span>
#include <vector>

#include "merbit/types.hpp"

namespace merbit {

// A position on the merge lattice between the nonzero axis (x, consumed by
// Right steps) and the row axis (y, consumed by Down steps).  The path runs
// from (0, 0) to (m, n) where m = nnz and n = row count, so x + y equals the
// number of steps taken.
struct PathCoord {
  index_t x = 0;
  index_t y = 0;

  friend bool operator==(const PathCoord&, const PathCoord&) = default;
};

enum class MergeStep : unsigned char { right, down };

// Locates the path/diagonal intersection by binary search on the row-offset
// array: the unique (x, y) with x + y == diag such that all rows above y are
// finished (row_offsets[y'] <= x for y' <= y) and row y is not.  O(log n)
// probes; `probe_count`, when non-null, receives the number of row_offsets
// comparisons performed so tests can pin the complexity bound.
PathCoord merge_search(std::span<const index_t> row_offsets, index_t diag,
                       index_t n_rows, index_t nnz,
                       int* probe_count = nullptr);

// Walks the entire path one step at a time: at (x, y) the step is Right
// exactly when x < row_offsets[y + 1] (the current row still has nonzeros to
// consume), else Down.  Serves as the brute-force oracle for merge_search and
// for descriptor-based path reconstruction.
std::vector<MergeStep> sequential_path(std::span<const index_t> row_offsets,
                                       index_t n_rows, index_t nnz);

// Coordinate reached after the first `steps` steps of `path`.
PathCoord path_coordinate_after(std::span<const MergeStep> path,
                                index_t steps);

struct PathPartition {
  std::vector<PathCoord> lane_starts;  // ceil((m+n)/sigma) entries
  std::vector<PathCoord> tile_starts;  // ceil((m+n)/(omega*sigma)) entries
};

// Start coordinates of every lane (slice of sigma steps) and every tile
// (omega consecutive lanes).  A tile start is its first lane's start.
PathPartition partition_starts(std::span<const index_t> row_offsets,
                               index_t n_rows, index_t nnz, int omega,
                               int sigma);

}  // namespace merbit
