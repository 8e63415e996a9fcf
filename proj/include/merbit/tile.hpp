#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "merbit/csr.hpp"
#include "merbit/descriptor.hpp"
#include "merbit/merge_path.hpp"

namespace merbit {

// Precomputed merge-path metadata for one (matrix, config) pair.
//
//   tile_x[i]    nonzero cursor at tile i's start; tile_x[tile_num] == nnz
//   tile_y[i]    row cursor at tile i's start in the low 31 bits; the MSB
//                marks a tile whose every step is Right (a long-row tile,
//                eligible for the fast reduction path).  The terminal entry
//                tile_y[tile_num] == n_rows and never carries the mark.
//   lane_desc[j] packed LaneFields for lane j (see descriptor.hpp), offsets
//                relative to the owning tile's start.
//
// With counts tile_num = ceil((m+n)/(omega*sigma)) and
// lane_num = ceil((m+n)/sigma), the arrays cost
// 8*(tile_num+1) + 4*lane_num bytes.
struct TileMetadata {
  int omega = 0;
  int sigma = 0;
  index_t n_rows = 0;
  index_t nnz = 0;
  index_t tile_num = 0;
  index_t lane_num = 0;
  std::vector<std::uint32_t> tile_x;     // tile_num + 1
  std::vector<std::uint32_t> tile_y;     // tile_num + 1
  std::vector<std::uint32_t> lane_desc;  // lane_num

  static constexpr std::uint32_t kLongRowMask = 0x80000000u;
  static std::uint32_t row_of(std::uint32_t v) { return v & ~kLongRowMask; }
  static bool is_marked(std::uint32_t v) { return (v & kLongRowMask) != 0; }

  // Steps assigned to lane j: sigma except possibly the final lane.
  index_t lane_steps(index_t j) const;
};

// Builds the TILE arrays by running merge_search at every lane's diagonal
// and simulating its sigma steps.  Per-lane work is O(log n + sigma); lanes
// are independent, so the builder may be parallelized without changing a
// byte of output.  Requires n_rows < 2^31 (long-row mark bit) and
// nnz <= 2^32 - 1 (32-bit nonzero cursors).
TileMetadata generate_tile(std::span<const index_t> row_offsets,
                           index_t n_rows, index_t nnz, const SimtConfig& c);

template <typename T>
TileMetadata generate_tile(const CsrMatrix<T>& a, const SimtConfig& c) {
  return generate_tile(std::span<const index_t>(a.row_offsets), a.n_rows,
                       a.nnz(), c);
}

// Decodes every lane descriptor back into merge steps, validating that each
// lane's recorded start matches the running path position and that the walk
// ends exactly at (nnz, n_rows); throws corruption_error otherwise.  The
// result must equal sequential_path on the source matrix.
std::vector<MergeStep> reconstruct_path(const TileMetadata& t,
                                        const SimtConfig& c);

// Fraction of tiles carrying the long-row mark (terminal entry excluded).
double long_row_fraction(const TileMetadata& t);

// Closed-form metadata footprint in bytes for an (m, n) matrix under config
// c when a fraction r_f of tiles is marked (marked tiles' descriptors are
// never read):
//
//   8 * (ceil((m+n)/(omega*sigma)) + 1) + 4 * ceil((m+n)/sigma) * (1 - r_f)
double metadata_footprint(index_t nnz, index_t n_rows, const SimtConfig& c,
                          double r_f);

// Bytes actually allocated by the three arrays of t.  Equals
// metadata_footprint(..., r_f = 0) exactly.
index_t allocated_tile_bytes(const TileMetadata& t);

// Versioned little-endian TILE cache.
void write_tile_cache(const std::string& path, const TileMetadata& t,
                      ScalarPrecision p);
struct TileCacheContents {
  TileMetadata tile;
  ScalarPrecision precision = ScalarPrecision::f64;
};
TileCacheContents read_tile_cache(const std::string& path);

}  // namespace merbit
