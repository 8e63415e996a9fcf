#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "merbit/fixtures.hpp"
#include "merbit/tile.hpp"
#include "support/generators.hpp"

using namespace merbit;

TEST_CASE("offset field width tracks the tile step count") {
  CHECK(SimtConfig::make(32, 14, 32).offset_bits == 9);   // 448 -> 2^9
  CHECK(SimtConfig::make(32, 7, 32).offset_bits == 8);    // 224 -> 2^8
  CHECK(SimtConfig::make(4, 4, 4).offset_bits == 4);      // 16  -> 2^4
  CHECK(SimtConfig::make(1, 1, 1).offset_bits == 0);
}

TEST_CASE("infeasible configurations are rejected with the constraint") {
  // sigma 20 at omega 32: 2*ceil_log2(640) + 20 = 40 > 32.
  CHECK_THROWS_WITH_AS(SimtConfig::make(32, 20, 32),
                       doctest::Contains("2*ceil_log2(omega*sigma) + sigma"),
                       config_error);
  CHECK_THROWS_AS(SimtConfig::make(0, 4, 4), config_error);
  CHECK_THROWS_AS(SimtConfig::make(4, 0, 4), config_error);
  CHECK_THROWS_AS(SimtConfig::make(4, 4, 6), config_error);   // not multiple
  CHECK_THROWS_AS(SimtConfig::make(4, 4, 2), config_error);   // < omega
}

TEST_CASE("sigma defaults per precision with override") {
  CHECK(select_sigma(ScalarPrecision::f32) == 14);
  CHECK(select_sigma(ScalarPrecision::f64) == 7);
  CHECK(select_sigma(ScalarPrecision::f64, 12) == 12);
}

TEST_CASE("descriptor packing: worked example and exhaustive round-trip") {
  const SimtConfig c = SimtConfig::make(32, 14, 32);
  // x_offset 3, y_offset 1, step 0 Down: (1 << 18) | (1 << 9) | 3.
  const LaneFields f{3, 1, 1};
  CHECK(pack_descriptor(f, c).word == 262659u);
  CHECK(unpack_descriptor({262659u}, c) == f);

  // Exhaustive at a small config: every representable field triple.
  const SimtConfig small = SimtConfig::make(4, 4, 4);
  for (std::uint32_t x = 0; x < 16; ++x) {
    for (std::uint32_t y = 0; y < 16; ++y) {
      for (std::uint32_t flags = 0; flags < 16; ++flags) {
        const LaneFields in{x, y, flags};
        CHECK(unpack_descriptor(pack_descriptor(in, small), small) == in);
      }
    }
  }
  // Field overflow is refused.
  CHECK_THROWS_AS(pack_descriptor({16, 0, 0}, small), capacity_error);
  CHECK_THROWS_AS(pack_descriptor({0, 0, 16}, small), capacity_error);
}

TEST_CASE("tile generation reproduces the published walkthrough") {
  const auto a = walkthrough_fixture<double>();
  const SimtConfig c = SimtConfig::make(4, 4, 4);
  const TileMetadata t = generate_tile(a, c);

  REQUIRE(t.tile_num == 3);
  REQUIRE(t.lane_num == 11);

  // Published walkthrough values vs. values forced by the partitioning rule
  // (tile starts must sit on diagonals 0, 16, 32).  Two published entries
  // are off-diagonal; print both sides.
  const std::vector<std::uint32_t> published_x = {0, 12, 26, 34};
  const std::vector<std::uint32_t> published_y = {0, 3, 7, 8};
  const std::vector<std::uint32_t> derived_x = {0, 13, 26, 34};
  const std::vector<std::uint32_t> derived_y = {0, 3, 6, 8};
  for (std::size_t i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(t.tile_x[i] == derived_x[i]);
    CHECK(TileMetadata::row_of(t.tile_y[i]) == derived_y[i]);
    if (published_x[i] != derived_x[i]) {
      MESSAGE("tile_x[", i, "]: published ", published_x[i],
              " lies off its diagonal; partitioning forces ", derived_x[i]);
    }
    if (published_y[i] != derived_y[i]) {
      MESSAGE("tile_y[", i, "]: published ", published_y[i],
              " lies off its diagonal; partitioning forces ", derived_y[i]);
    }
  }

  // Tile 1 lane offsets match the walkthrough exactly.
  std::vector<std::uint32_t> x_offsets, y_offsets;
  for (index_t j = 4; j < 8; ++j) {
    const LaneFields f =
        unpack_descriptor({t.lane_desc[static_cast<std::size_t>(j)]}, c);
    x_offsets.push_back(f.x_offset);
    y_offsets.push_back(f.y_offset);
  }
  CHECK(x_offsets == std::vector<std::uint32_t>{0, 3, 7, 10});
  CHECK(y_offsets == std::vector<std::uint32_t>{0, 1, 1, 2});

  // Tile 1, lane 0: finalizes its first row, then three Rights (T,F,F,F).
  const LaneFields lane4 = unpack_descriptor({t.lane_desc[4]}, c);
  CHECK(lane4.bit_flag == 0b0001u);

  // No tile of this fixture is single-row, so none is marked.
  CHECK(long_row_fraction(t) == 0.0);

  // Full decode agrees with the walked path.
  const auto decoded = reconstruct_path(t, c);
  const auto walked = sequential_path(a.row_offsets, a.n_rows, a.nnz());
  CHECK(decoded == walked);
}

TEST_CASE("tile decode equals the walked path on fuzz matrices") {
  const SimtConfig configs[] = {
      SimtConfig::make(32, 14, 128),
      SimtConfig::make(32, 7, 128),
      SimtConfig::make(4, 4, 16),
  };
  for (auto shape : testing::kAllShapes) {
    for (std::uint64_t seed = 41; seed <= 44; ++seed) {
      const auto a = coo_to_csr<double>(testing::random_matrix(shape, seed));
      const auto walked = sequential_path(a.row_offsets, a.n_rows, a.nnz());
      for (const SimtConfig& c : configs) {
        const TileMetadata t = generate_tile(a, c);
        CHECK(reconstruct_path(t, c) == walked);
        // Terminal entries are exact and unmarked.
        CHECK(t.tile_x.back() == static_cast<std::uint32_t>(a.nnz()));
        CHECK(t.tile_y.back() == static_cast<std::uint32_t>(a.n_rows));
        CHECK_FALSE(TileMetadata::is_marked(t.tile_y.back()));
      }
    }
  }
}

TEST_CASE("single-row matrices mark every full tile") {
  const SimtConfig c = SimtConfig::make(4, 4, 16);
  // 1 x 64 dense row: 65 steps = 4 full tiles (all Rights) + 1 tail tile
  // holding the final Down.
  const auto a = single_dense_row_fixture<double>(64, 7);
  const TileMetadata t = generate_tile(a, c);
  REQUIRE(t.tile_num == 5);
  for (index_t i = 0; i < 4; ++i) {
    CHECK(TileMetadata::is_marked(t.tile_y[static_cast<std::size_t>(i)]));
    CHECK(TileMetadata::row_of(t.tile_y[static_cast<std::size_t>(i)]) == 0);
  }
  CHECK_FALSE(TileMetadata::is_marked(t.tile_y[4]));
  CHECK(long_row_fraction(t) == doctest::Approx(0.8));
}

TEST_CASE("generation rejects row counts that collide with the mark bit") {
  // Fake a 2^31-row empty matrix via its offsets span; generation must
  // refuse before touching the data.
  const index_t huge = index_t(1) << 31;
  std::vector<index_t> offsets;  // deliberately not allocated to size
  const SimtConfig c = SimtConfig::make(4, 4, 4);
  CHECK_THROWS_AS(
      generate_tile(std::span<const index_t>(offsets.data(), 0), huge, 0, c),
      capacity_error);
}

TEST_CASE("metadata footprint formula and array accounting") {
  // Worked example: m + n = 448 at (32, 14) is one tile, 32 lanes:
  // 8 * 2 + 4 * 32 = 144 bytes.
  const SimtConfig c32 = SimtConfig::make(32, 14, 32);
  CHECK(metadata_footprint(434, 14, c32, 0.0) == doctest::Approx(144.0));
  // Fully marked tiles keep only the cursor arrays: 16 bytes.
  CHECK(metadata_footprint(434, 14, c32, 1.0) == doctest::Approx(16.0));

  // Walkthrough fixture at (4, 4): 3 tiles + terminal, 11 lanes, r_f = 0.
  const auto a = walkthrough_fixture<double>();
  const SimtConfig c = SimtConfig::make(4, 4, 4);
  const TileMetadata t = generate_tile(a, c);
  CHECK(allocated_tile_bytes(t) == 8 * 4 + 4 * 11);
  CHECK(metadata_footprint(a.nnz(), a.n_rows, c, 0.0) ==
        doctest::Approx(static_cast<double>(allocated_tile_bytes(t))));
}

TEST_CASE("tile cache round-trips and rejects corruption") {
  const auto a = walkthrough_fixture<double>();
  const SimtConfig c = SimtConfig::make(4, 4, 4);
  const TileMetadata t = generate_tile(a, c);
  const std::string path = "format_tile_cache_test.bin";
  write_tile_cache(path, t, ScalarPrecision::f64);

  const TileCacheContents back = read_tile_cache(path);
  CHECK(back.precision == ScalarPrecision::f64);
  CHECK(back.tile.omega == t.omega);
  CHECK(back.tile.sigma == t.sigma);
  CHECK(back.tile.tile_x == t.tile_x);
  CHECK(back.tile.tile_y == t.tile_y);
  CHECK(back.tile.lane_desc == t.lane_desc);
  CHECK(reconstruct_path(back.tile, c) ==
        sequential_path(a.row_offsets, a.n_rows, a.nnz()));

  // Flip one descriptor bit: the decode must detect the broken path.
  TileMetadata bad = t;
  bad.lane_desc[5] ^= 1u << (2 * c.offset_bits);  // first step flag of lane 5
  CHECK_THROWS_AS(reconstruct_path(bad, c), corruption_error);

  // Truncated cache file: corruption on read.
  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(),
              static_cast<std::streamsize>(bytes.size() - 6));
  }
  CHECK_THROWS_AS(read_tile_cache(path), corruption_error);
  std::remove(path.c_str());
}

TEST_CASE("lane and tile counts follow the ceiling formulas") {
  for (auto shape : testing::kAllShapes) {
    const auto a = coo_to_csr<double>(testing::random_matrix(shape, 55));
    const SimtConfig c = SimtConfig::make(32, 7, 128);
    const TileMetadata t = generate_tile(a, c);
    const index_t total = a.nnz() + a.n_rows;
    CHECK(t.lane_num == (total + 6) / 7);
    CHECK(t.tile_num == (total + 223) / 224);
    CHECK(static_cast<index_t>(t.lane_desc.size()) == t.lane_num);
    CHECK(static_cast<index_t>(t.tile_x.size()) == t.tile_num + 1);
  }
}
