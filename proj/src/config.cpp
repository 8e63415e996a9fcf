#include "merbit/config.hpp"

namespace merbit {

int ceil_log2(index_t x) {
  if (x < 1) throw dimension_error("ceil_log2 of nonpositive value");
  int k = 0;
  while ((index_t(1) << k) < x) ++k;
  return k;
}

SimtConfig SimtConfig::make(int omega, int sigma, int block_size) {
  if (omega < 1) throw config_error("omega must be >= 1");
  if (sigma < 1) throw config_error("sigma must be >= 1");
  if (block_size < omega) {
    throw config_error("block_size " + std::to_string(block_size) +
                       " smaller than omega " + std::to_string(omega));
  }
  if (block_size % omega != 0) {
    throw config_error("block_size " + std::to_string(block_size) +
                       " not a multiple of omega " + std::to_string(omega));
  }
  const int offset_bits =
      ceil_log2(static_cast<index_t>(omega) * sigma);
  const int word_bits = 2 * offset_bits + sigma;
  if (word_bits > 32) {
    throw config_error(
        "infeasible descriptor layout: 2*ceil_log2(omega*sigma) + sigma = 2*" +
        std::to_string(offset_bits) + " + " + std::to_string(sigma) + " = " +
        std::to_string(word_bits) + " exceeds 32");
  }
  SimtConfig c;
  c.omega = omega;
  c.sigma = sigma;
  c.block_size = block_size;
  c.offset_bits = offset_bits;
  return c;
}

int select_sigma(ScalarPrecision p, std::optional<int> override) {
  if (override.has_value()) return *override;
  return p == ScalarPrecision::f32 ? 14 : 7;
}

double shared_memory_bytes(const SimtConfig& c, std::size_t value_size) {
  return static_cast<double>(c.block_size + 1) * c.sigma *
         static_cast<double>(value_size);
}

}  // namespace merbit
