#include "merbit/tile.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <fstream>

namespace merbit {

index_t TileMetadata::lane_steps(index_t j) const {
  const index_t total = nnz + n_rows;
  const index_t start = j * sigma;
  assert(j >= 0 && j < lane_num);
  return std::min<index_t>(sigma, total - start);
}

TileMetadata generate_tile(std::span<const index_t> row_offsets,
                           index_t n_rows, index_t nnz, const SimtConfig& c) {
  if (n_rows >= (index_t(1) << 31)) {
    throw capacity_error("row count " + std::to_string(n_rows) +
                         " collides with the long-row mark bit (limit 2^31)");
  }
  if (nnz > index_t(0xFFFFFFFF)) {
    throw capacity_error("nonzero count " + std::to_string(nnz) +
                         " exceeds the 32-bit tile cursor");
  }
  const index_t total = nnz + n_rows;
  TileMetadata t;
  t.omega = c.omega;
  t.sigma = c.sigma;
  t.n_rows = n_rows;
  t.nnz = nnz;
  t.lane_num = total == 0 ? 0 : (total + c.sigma - 1) / c.sigma;
  t.tile_num =
      total == 0 ? 0 : (total + c.steps_per_tile() - 1) / c.steps_per_tile();
  t.tile_x.assign(static_cast<std::size_t>(t.tile_num) + 1, 0);
  t.tile_y.assign(static_cast<std::size_t>(t.tile_num) + 1, 0);
  t.lane_desc.assign(static_cast<std::size_t>(t.lane_num), 0);

  for (index_t i = 0; i < t.tile_num; ++i) {
    index_t tile_start_x = 0;
    index_t tile_start_y = 0;
    bool any_down = false;
    for (int lid = 0; lid < c.omega; ++lid) {
      const index_t j = i * c.omega + lid;
      if (j >= t.lane_num) break;
      const index_t diag = j * c.sigma;
      PathCoord start = merge_search(row_offsets, diag, n_rows, nnz);
      if (lid == 0) {
        tile_start_x = start.x;
        tile_start_y = start.y;
      }
      LaneFields f;
      f.x_offset = static_cast<std::uint32_t>(start.x - tile_start_x);
      f.y_offset = static_cast<std::uint32_t>(start.y - tile_start_y);
      const index_t steps = std::min<index_t>(c.sigma, total - diag);
      index_t x = start.x;
      index_t y = start.y;
      for (index_t k = 0; k < steps; ++k) {
        assert(y <= n_rows);
        if (y < n_rows &&
            x < row_offsets[static_cast<std::size_t>(y) + 1]) {
          ++x;
        } else {
          f.bit_flag |= 1u << k;
          ++y;
          any_down = true;
        }
      }
      t.lane_desc[static_cast<std::size_t>(j)] = pack_descriptor(f, c).word;
    }
    t.tile_x[static_cast<std::size_t>(i)] =
        static_cast<std::uint32_t>(tile_start_x);
    std::uint32_t ty = static_cast<std::uint32_t>(tile_start_y);
    // A tile in which no lane stepped Down lies entirely inside one row; the
    // mark routes it to the fast reduction path at multiply time.
    if (!any_down) ty |= TileMetadata::kLongRowMask;
    t.tile_y[static_cast<std::size_t>(i)] = ty;
  }
  t.tile_x[static_cast<std::size_t>(t.tile_num)] =
      static_cast<std::uint32_t>(nnz);
  t.tile_y[static_cast<std::size_t>(t.tile_num)] =
      static_cast<std::uint32_t>(n_rows);
  return t;
}

std::vector<MergeStep> reconstruct_path(const TileMetadata& t,
                                        const SimtConfig& c) {
  if (t.omega != c.omega || t.sigma != c.sigma) {
    throw config_error("tile built for omega=" + std::to_string(t.omega) +
                       " sigma=" + std::to_string(t.sigma) +
                       ", decode requested omega=" + std::to_string(c.omega) +
                       " sigma=" + std::to_string(c.sigma));
  }
  std::vector<MergeStep> path;
  path.reserve(static_cast<std::size_t>(t.nnz + t.n_rows));
  index_t x = 0, y = 0;
  for (index_t j = 0; j < t.lane_num; ++j) {
    const index_t tile = j / c.omega;
    const LaneFields f =
        unpack_descriptor({t.lane_desc[static_cast<std::size_t>(j)]}, c);
    const index_t lane_x =
        static_cast<index_t>(t.tile_x[static_cast<std::size_t>(tile)]) +
        f.x_offset;
    const index_t lane_y =
        static_cast<index_t>(TileMetadata::row_of(
            t.tile_y[static_cast<std::size_t>(tile)])) +
        f.y_offset;
    if (lane_x != x || lane_y != y) {
      throw corruption_error(
          "lane " + std::to_string(j) + " start (" + std::to_string(lane_x) +
          ", " + std::to_string(lane_y) + ") does not continue the path at (" +
          std::to_string(x) + ", " + std::to_string(y) + ")");
    }
    const index_t steps = t.lane_steps(j);
    for (index_t k = 0; k < steps; ++k) {
      if ((f.bit_flag >> k) & 1u) {
        path.push_back(MergeStep::down);
        ++y;
      } else {
        path.push_back(MergeStep::right);
        ++x;
      }
    }
  }
  if (x != t.nnz || y != t.n_rows) {
    throw corruption_error("decoded path ends at (" + std::to_string(x) +
                           ", " + std::to_string(y) + "), expected (" +
                           std::to_string(t.nnz) + ", " +
                           std::to_string(t.n_rows) + ")");
  }
  return path;
}

double long_row_fraction(const TileMetadata& t) {
  if (t.tile_num == 0) return 0.0;
  index_t marked = 0;
  for (index_t i = 0; i < t.tile_num; ++i) {
    if (TileMetadata::is_marked(t.tile_y[static_cast<std::size_t>(i)])) {
      ++marked;
    }
  }
  return static_cast<double>(marked) / static_cast<double>(t.tile_num);
}

double metadata_footprint(index_t nnz, index_t n_rows, const SimtConfig& c,
                          double r_f) {
  const index_t total = nnz + n_rows;
  const index_t tiles =
      total == 0 ? 0 : (total + c.steps_per_tile() - 1) / c.steps_per_tile();
  const index_t lanes = total == 0 ? 0 : (total + c.sigma - 1) / c.sigma;
  return 8.0 * static_cast<double>(tiles + 1) +
         4.0 * static_cast<double>(lanes) * (1.0 - r_f);
}

index_t allocated_tile_bytes(const TileMetadata& t) {
  return 4 * static_cast<index_t>(t.tile_x.size() + t.tile_y.size() +
                                  t.lane_desc.size());
}

namespace {

constexpr char kTileMagic[4] = {'M', 'B', 'T', 'L'};
constexpr std::uint32_t kTileVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw corruption_error("short read in tile cache '" + path + "'");
  }
  return v;
}

}  // namespace

void write_tile_cache(const std::string& path, const TileMetadata& t,
                      ScalarPrecision p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path + "'");
  out.write(kTileMagic, sizeof(kTileMagic));
  put(out, kTileVersion);
  put(out, static_cast<std::uint32_t>(t.omega));
  put(out, static_cast<std::uint32_t>(t.sigma));
  put(out, static_cast<std::uint64_t>(t.nnz));
  put(out, static_cast<std::uint64_t>(t.n_rows));
  put(out, static_cast<std::uint8_t>(p == ScalarPrecision::f64 ? 1 : 0));
  for (std::uint32_t v : t.tile_x) put(out, v);
  for (std::uint32_t v : t.tile_y) put(out, v);
  for (std::uint32_t v : t.lane_desc) put(out, v);
  if (!out) throw io_error("write failed for '" + path + "'");
}

TileCacheContents read_tile_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kTileMagic, 4) != 0) {
    throw parse_error("'" + path + "' is not a tile cache");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kTileVersion) {
    throw parse_error("unsupported tile cache version " +
                      std::to_string(version));
  }
  TileCacheContents contents;
  TileMetadata& t = contents.tile;
  t.omega = static_cast<int>(get<std::uint32_t>(in, path));
  t.sigma = static_cast<int>(get<std::uint32_t>(in, path));
  t.nnz = static_cast<index_t>(get<std::uint64_t>(in, path));
  t.n_rows = static_cast<index_t>(get<std::uint64_t>(in, path));
  contents.precision = get<std::uint8_t>(in, path) != 0
                           ? ScalarPrecision::f64
                           : ScalarPrecision::f32;
  if (t.omega < 1 || t.sigma < 1 || t.nnz < 0 || t.n_rows < 0) {
    throw corruption_error("invalid header in tile cache '" + path + "'");
  }
  const index_t total = t.nnz + t.n_rows;
  const index_t span = static_cast<index_t>(t.omega) * t.sigma;
  t.lane_num = total == 0 ? 0 : (total + t.sigma - 1) / t.sigma;
  t.tile_num = total == 0 ? 0 : (total + span - 1) / span;
  t.tile_x.resize(static_cast<std::size_t>(t.tile_num) + 1);
  t.tile_y.resize(static_cast<std::size_t>(t.tile_num) + 1);
  t.lane_desc.resize(static_cast<std::size_t>(t.lane_num));
  for (std::uint32_t& v : t.tile_x) v = get<std::uint32_t>(in, path);
  for (std::uint32_t& v : t.tile_y) v = get<std::uint32_t>(in, path);
  for (std::uint32_t& v : t.lane_desc) v = get<std::uint32_t>(in, path);
  return contents;
}

}  // namespace merbit
