#include "merbit/merge_path.hpp"

#include <algorithm>
#include <cassert>

namespace merbit {

PathCoord merge_search(std::span<const index_t> row_offsets, index_t diag,
                       index_t n_rows, index_t nnz, int* probe_count) {
  if (static_cast<index_t>(row_offsets.size()) != n_rows + 1) {
    throw dimension_error("merge_search: row_offsets has " +
                          std::to_string(row_offsets.size()) +
                          " entries for " + std::to_string(n_rows) + " rows");
  }
  if (diag < 0 || diag > nnz + n_rows) {
    throw dimension_error("merge_search: diagonal " + std::to_string(diag) +
                          " outside [0, " + std::to_string(nnz + n_rows) +
                          "]");
  }
  index_t y_min = std::max<index_t>(diag - nnz, 0);
  index_t y_max = std::min<index_t>(diag, n_rows);
  int probes = 0;
  while (y_min < y_max) {
    const index_t mid = (y_min + y_max) >> 1;
    ++probes;
    // Row `mid` is fully consumed strictly before this diagonal iff its end
    // offset fits in the x budget remaining after mid+1 Down steps.
    if (row_offsets[static_cast<std::size_t>(mid) + 1] <= diag - mid - 1) {
      y_min = mid + 1;
    } else {
      y_max = mid;
    }
  }
  if (probe_count != nullptr) *probe_count = probes;
  return {diag - y_min, std::min(y_min, n_rows)};
}

std::vector<MergeStep> sequential_path(std::span<const index_t> row_offsets,
                                       index_t n_rows, index_t nnz) {
  if (static_cast<index_t>(row_offsets.size()) != n_rows + 1) {
    throw dimension_error("sequential_path: row_offsets has " +
                          std::to_string(row_offsets.size()) +
                          " entries for " + std::to_string(n_rows) + " rows");
  }
  std::vector<MergeStep> path;
  path.reserve(static_cast<std::size_t>(nnz + n_rows));
  index_t x = 0, y = 0;
  while (x < nnz || y < n_rows) {
    if (y < n_rows && x < row_offsets[static_cast<std::size_t>(y) + 1]) {
      path.push_back(MergeStep::right);
      ++x;
    } else {
      assert(y < n_rows);
      path.push_back(MergeStep::down);
      ++y;
    }
  }
  return path;
}

PathCoord path_coordinate_after(std::span<const MergeStep> path,
                                index_t steps) {
  if (steps < 0 || steps > static_cast<index_t>(path.size())) {
    throw dimension_error("path_coordinate_after: step count out of range");
  }
  PathCoord c;
  for (index_t i = 0; i < steps; ++i) {
    if (path[static_cast<std::size_t>(i)] == MergeStep::right) {
      ++c.x;
    } else {
      ++c.y;
    }
  }
  return c;
}

PathPartition partition_starts(std::span<const index_t> row_offsets,
                               index_t n_rows, index_t nnz, int omega,
                               int sigma) {
  if (omega < 1 || sigma < 1) {
    throw config_error("partition_starts: omega and sigma must be >= 1");
  }
  const index_t total = nnz + n_rows;
  const index_t lane_span = sigma;
  const index_t tile_span = static_cast<index_t>(omega) * sigma;
  const index_t lanes = (total + lane_span - 1) / lane_span;
  const index_t tiles = (total + tile_span - 1) / tile_span;
  PathPartition part;
  part.lane_starts.reserve(static_cast<std::size_t>(lanes));
  for (index_t j = 0; j < lanes; ++j) {
    part.lane_starts.push_back(
        merge_search(row_offsets, j * lane_span, n_rows, nnz));
  }
  part.tile_starts.reserve(static_cast<std::size_t>(tiles));
  for (index_t t = 0; t < tiles; ++t) {
    part.tile_starts.push_back(
        part.lane_starts[static_cast<std::size_t>(t) * omega]);
  }
  return part;
}

}  // namespace merbit
