#pragma once

#include <optional>

#include "merbit/types.hpp"

namespace merbit {

// Smallest k with 2^k >= x (x >= 1).  ceil_log2(1) == 0.
int ceil_log2(index_t x);

// Execution shape of the simulated SIMT machine: omega lanes per warp, sigma
// merge-path steps per lane, block_size lanes per block.  offset_bits is the
// derived width of each packed coordinate field; a configuration is feasible
// only when two offset fields plus the sigma step flags fit one 32-bit word:
//
//     2 * ceil_log2(omega * sigma) + sigma <= 32
struct SimtConfig {
  int omega = 32;
  int sigma = 14;
  int block_size = 128;
  int offset_bits = 9;

  // Validates and derives offset_bits; throws config_error naming the
  // violated constraint otherwise.
  static SimtConfig make(int omega, int sigma, int block_size);

  int warps_per_block() const { return block_size / omega; }
  index_t steps_per_lane() const { return sigma; }
  index_t steps_per_tile() const {
    return static_cast<index_t>(omega) * sigma;
  }
  index_t steps_per_block() const {
    return static_cast<index_t>(block_size) * sigma;
  }

  friend bool operator==(const SimtConfig&, const SimtConfig&) = default;
};

// Default slice length per value precision: 14 for f32, 7 for f64 (an
// override wins when provided).
int select_sigma(ScalarPrecision p, std::optional<int> override = {});

// Per-block scratch requirement in bytes: (block_size + 1) * sigma scalars.
double shared_memory_bytes(const SimtConfig& c, std::size_t value_size);

}  // namespace merbit
