#pragma once

#include <cstdint>

#include "merbit/config.hpp"

namespace merbit {

// Unpacked view of one lane descriptor.  x_offset / y_offset locate the
// lane's start relative to its tile's start (nonzero cursor and row cursor
// respectively, each < omega * sigma); bit k of bit_flag is 1 when the lane's
// k-th merge-path step is Down (row change), 0 when it is Right (nonzero
// consumed).  Bits at and beyond the lane's step count are zero.
struct LaneFields {
  std::uint32_t x_offset = 0;
  std::uint32_t y_offset = 0;
  std::uint32_t bit_flag = 0;

  friend bool operator==(const LaneFields&, const LaneFields&) = default;
};

// 32-bit word layout, low to high: x_offset [offset_bits], y_offset
// [offset_bits], bit_flag [sigma].
struct LaneDescriptor {
  std::uint32_t word = 0;

  friend bool operator==(const LaneDescriptor&, const LaneDescriptor&) =
      default;
};

inline LaneDescriptor pack_descriptor(const LaneFields& f,
                                      const SimtConfig& c) {
  const std::uint32_t field_limit = 1u << c.offset_bits;
  if (f.x_offset >= field_limit || f.y_offset >= field_limit) {
    throw capacity_error("descriptor offset exceeds " +
                         std::to_string(c.offset_bits) + " bits");
  }
  if (c.sigma < 32 && (f.bit_flag >> c.sigma) != 0) {
    throw capacity_error("descriptor step flags exceed sigma bits");
  }
  return {(f.bit_flag << (2 * c.offset_bits)) |
          (f.y_offset << c.offset_bits) | f.x_offset};
}

inline LaneFields unpack_descriptor(LaneDescriptor d, const SimtConfig& c) {
  const std::uint32_t mask = (1u << c.offset_bits) - 1u;
  LaneFields f;
  f.x_offset = d.word & mask;
  f.y_offset = (d.word >> c.offset_bits) & mask;
  f.bit_flag = d.word >> (2 * c.offset_bits);
  return f;
}

}  // namespace merbit
