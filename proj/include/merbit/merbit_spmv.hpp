#pragma once

#include <bit>
#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "merbit/csr.hpp"
#include "merbit/dual_buffer.hpp"
#include "merbit/thread_pool.hpp"
#include "merbit/tile.hpp"

namespace merbit {

// Optional observation channel for tests: tile-routing counters and, when
// collect_deposits is set, every (row, amount) contribution the tackle phase
// makes to a row partial.  Summing deposits per row reproduces the final
// output up to floating-point regrouping, which pins down the conservation
// property "every staged product lands in exactly one row".
template <typename T>
struct SpmvTrace {
  bool collect_deposits = false;
  std::int64_t fast_tiles = 0;
  std::int64_t normal_tiles = 0;
  std::int64_t skipped_tiles = 0;
  std::vector<std::pair<index_t, T>> deposits;  // concatenated in block order
};

namespace detail {

// Per-worker reusable buffers: the block scratch (staged products followed by
// row partials) plus the lockstep warp state.
template <typename T>
struct BlockArena {
  std::vector<T> scratch;
  std::vector<T> lane_sum, run_sum, tmp_sum, fast_sub;
  std::vector<index_t> lane_row;
  std::vector<unsigned char> lane_flag, run_flag, tmp_flag;

  void prepare(const SimtConfig& c) {
    scratch.resize(static_cast<std::size_t>(c.block_size + 1) * c.sigma);
    const std::size_t w = static_cast<std::size_t>(c.omega);
    lane_sum.resize(w);
    run_sum.resize(w);
    tmp_sum.resize(w);
    fast_sub.resize(std::bit_ceil(w));
    lane_row.resize(w);
    lane_flag.resize(w);
    run_flag.resize(w);
    tmp_flag.resize(w);
  }
};

// Strided per-lane subtotals followed by a fixed halving tree.  The shape
// depends only on (omega, element count), never on the schedule, so marked
// tiles reduce identically from run to run.
template <typename T>
T fast_tile_reduce(const CsrMatrix<T>& a, std::span<const T> x, index_t x_ws,
                   index_t x_se, int omega, std::span<T> sub) {
  const std::size_t width = sub.size();  // bit_ceil(omega)
  for (std::size_t i = 0; i < width; ++i) sub[i] = T(0);
  for (int lid = 0; lid < omega; ++lid) {
    T acc = T(0);
    for (index_t k = lid; k < x_se; k += omega) {
      const std::size_t p = static_cast<std::size_t>(x_ws + k);
      acc += a.values[p] *
             x[static_cast<std::size_t>(a.col_indices[p])];
    }
    sub[static_cast<std::size_t>(lid)] = acc;
  }
  for (std::size_t stride = width / 2; stride >= 1; stride /= 2) {
    for (std::size_t k = 0; k < stride; ++k) sub[k] += sub[k + stride];
    if (stride == 1) break;
  }
  return sub[0];
}

// Inclusive segmented scan across the warp's trailing sums (lockstep
// doubling), then one deposit per segment boundary: each lane whose scan
// carried a row boundary adds its predecessor's propagated sum into the
// predecessor's final row; lane 0 wraps around and deposits the tile's
// trailing carry.  Deposit targets are pairwise distinct, and the deposit
// loop runs in ascending lane order, so the result is schedule-free.
template <typename T, typename Deposit>
void warp_segmented_sum(BlockArena<T>& ar, int omega, const Deposit& deposit) {
  for (int lid = 0; lid < omega; ++lid) {
    ar.run_sum[lid] = ar.lane_sum[lid];
    ar.run_flag[lid] = ar.lane_flag[lid];
  }
  for (int offset = 1; offset < omega; offset <<= 1) {
    bool all_flagged = true;
    for (int lid = 0; lid < omega; ++lid) {
      if (!ar.run_flag[lid]) {
        all_flagged = false;
        break;
      }
    }
    if (all_flagged) break;
    for (int lid = 0; lid < omega; ++lid) {
      const int src = lid >= offset ? lid - offset : lid;
      ar.tmp_sum[lid] = ar.run_sum[src];
      ar.tmp_flag[lid] = ar.run_flag[src];
    }
    for (int lid = 0; lid < omega; ++lid) {
      if (lid >= offset && !ar.run_flag[lid]) {
        ar.run_sum[lid] += ar.tmp_sum[lid];
        ar.run_flag[lid] = ar.tmp_flag[lid];
      }
    }
  }
  for (int lid = 0; lid < omega; ++lid) {
    if (!ar.lane_flag[lid]) continue;
    const int src = lid == 0 ? omega - 1 : lid - 1;
    deposit(ar.lane_row[src], ar.run_sum[src]);
  }
}

// Rows the commit phase cannot finish locally: the block's first and last
// row partials may continue into neighbouring blocks, so they are collected
// here and folded in ascending block order after the parallel phase.
template <typename T>
struct BoundaryCarry {
  int count = 0;
  index_t row[2] = {0, 0};
  T sum[2] = {T(0), T(0)};
};

}  // namespace detail

// Descriptor-driven multiply: out.active() += A * x with the dual-buffer
// protocol (active target assumed all zero on entry, companion re-zeroed
// block by block, parity flipped on completion).  Bitwise deterministic for
// any pool size: block writes are disjoint and both carry folding and all
// in-block reductions run in a fixed order.
template <typename T>
void spmv_merbit(const CsrMatrix<T>& a, const TileMetadata& t,
                 const SimtConfig& c, std::span<const T> x, DualBuffer<T>& out,
                 ThreadPool* pool = nullptr, SpmvTrace<T>* trace = nullptr) {
  if (t.omega != c.omega || t.sigma != c.sigma) {
    throw config_error("tile metadata built for omega=" +
                       std::to_string(t.omega) + " sigma=" +
                       std::to_string(t.sigma) + ", run requested omega=" +
                       std::to_string(c.omega) + " sigma=" +
                       std::to_string(c.sigma));
  }
  if (t.n_rows != a.n_rows || t.nnz != a.nnz()) {
    throw config_error("tile metadata shape (" + std::to_string(t.n_rows) +
                       " rows, " + std::to_string(t.nnz) +
                       " nnz) does not match the matrix");
  }
  if (static_cast<index_t>(x.size()) != a.n_cols) {
    throw dimension_error("spmv: x has " + std::to_string(x.size()) +
                          " entries, matrix has " + std::to_string(a.n_cols) +
                          " columns");
  }
  if (out.size() != a.n_rows) {
    throw dimension_error("spmv: output pair sized " +
                          std::to_string(out.size()) + " for " +
                          std::to_string(a.n_rows) + " rows");
  }

  const int wpb = c.warps_per_block();
  const index_t blocks = (t.tile_num + wpb - 1) / wpb;
  std::vector<T>& y = out.active();
  std::vector<T>& z = out.inactive();
  std::vector<detail::BoundaryCarry<T>> carries(
      static_cast<std::size_t>(blocks));

  struct BlockCounters {
    std::int64_t fast = 0, normal = 0, skipped = 0;
  };
  std::vector<BlockCounters> counters;
  std::vector<std::vector<std::pair<index_t, T>>> block_deposits;
  if (trace != nullptr) {
    counters.resize(static_cast<std::size_t>(blocks));
    if (trace->collect_deposits) {
      block_deposits.resize(static_cast<std::size_t>(blocks));
    }
  }

  auto run_block = [&](index_t block) {
    static thread_local detail::BlockArena<T> arena;
    detail::BlockArena<T>& ar = arena;
    ar.prepare(c);

    const index_t bs = block * wpb;
    const index_t be = std::min<index_t>(bs + wpb, t.tile_num);
    const index_t x_bs = t.tile_x[static_cast<std::size_t>(bs)];
    const index_t y_bs =
        TileMetadata::row_of(t.tile_y[static_cast<std::size_t>(bs)]);
    const index_t y_be =
        TileMetadata::row_of(t.tile_y[static_cast<std::size_t>(be)]);
    const index_t m_b = t.tile_x[static_cast<std::size_t>(be)] - x_bs;
    const index_t y_se = y_be - y_bs;
    // Scratch budget: staged products plus row partials never exceed one
    // step per block slot plus the shared trailing row.
    assert(m_b + y_se + 1 <= c.steps_per_block() + 1);
    T* const products = ar.scratch.data();
    T* const partials = ar.scratch.data() + m_b;
    for (index_t r = 0; r <= y_se; ++r) partials[r] = T(0);

    auto deposit = [&](index_t slot, T amount) {
      assert(slot >= 0 && slot <= y_se);
      partials[slot] += amount;
      if (trace != nullptr && trace->collect_deposits) {
        block_deposits[static_cast<std::size_t>(block)].push_back(
            {y_bs + slot, amount});
      }
    };

    for (index_t i = bs; i < be; ++i) {
      const index_t x_ws = t.tile_x[static_cast<std::size_t>(i)];
      const index_t x_we = t.tile_x[static_cast<std::size_t>(i) + 1];
      const index_t x_se = x_we - x_ws;
      assert(x_se <= c.steps_per_tile());
      if (x_se == 0) {
        // Every step in this tile is a row transition; the rows' contents
        // (if any) were already deposited as earlier trailing carries.
        if (trace != nullptr) {
          ++counters[static_cast<std::size_t>(block)].skipped;
        }
        continue;
      }
      const std::uint32_t ty = t.tile_y[static_cast<std::size_t>(i)];
      const index_t y_ws = TileMetadata::row_of(ty);
      const index_t y_bw = y_ws - y_bs;
      const index_t x_bw = x_ws - x_bs;

      if (TileMetadata::is_marked(ty)) {
        deposit(y_bw, detail::fast_tile_reduce(a, x, x_ws, x_se, c.omega,
                                               std::span<T>(ar.fast_sub)));
        if (trace != nullptr) {
          ++counters[static_cast<std::size_t>(block)].fast;
        }
        continue;
      }
      if (trace != nullptr) {
        ++counters[static_cast<std::size_t>(block)].normal;
      }

      // Stage this tile's products; lanes gather them by staged index, so
      // the x side of the scan never touches the matrix again.
      for (index_t k = 0; k < x_se; ++k) {
        const std::size_t p = static_cast<std::size_t>(x_ws + k);
        assert(a.col_indices[p] >= 0 && a.col_indices[p] < a.n_cols);
        products[x_bw + k] =
            a.values[p] * x[static_cast<std::size_t>(a.col_indices[p])];
      }

      for (int lid = 0; lid < c.omega; ++lid) {
        const index_t j = i * c.omega + lid;
        if (j >= t.lane_num) {
          // Inactive tail lane: a closed, empty segment keeps the lockstep
          // shape and deposits nothing but zeros.
          ar.lane_sum[lid] = T(0);
          ar.lane_row[lid] = 0;
          ar.lane_flag[lid] = 1;
          continue;
        }
        const LaneFields f = unpack_descriptor(
            {t.lane_desc[static_cast<std::size_t>(j)]}, c);
        const index_t steps = t.lane_steps(j);
        index_t xo = f.x_offset;
        index_t yo = f.y_offset;
        T sum = T(0);
        bool first_down = true;
        bool flag = lid == 0;
        for (index_t k = 0; k < steps; ++k) {
          if ((f.bit_flag >> k) & 1u) {
            if (first_down) {
              // The row under the lane's head may extend into predecessor
              // lanes, so the first closure accumulates.
              deposit(y_bw + yo, sum);
              first_down = false;
            } else {
              // Rows opened and closed inside this lane belong to it alone.
              assert(y_bw + yo <= y_se);
              partials[y_bw + yo] = sum;
              if (trace != nullptr && trace->collect_deposits) {
                block_deposits[static_cast<std::size_t>(block)].push_back(
                    {y_bs + y_bw + yo, sum});
              }
            }
            sum = T(0);
            ++yo;
            flag = true;
          } else {
            assert(x_bw + xo < m_b);
            sum += products[x_bw + xo];
            ++xo;
          }
        }
        ar.lane_sum[lid] = sum;
        ar.lane_row[lid] = yo;
        ar.lane_flag[lid] = flag ? 1 : 0;
      }
      detail::warp_segmented_sum<T>(ar, c.omega, [&](index_t row, T amount) {
        deposit(y_bw + row, amount);
      });
    }

    // Commit: interior partials are complete rows; the first and last slots
    // may be shared with neighbouring blocks and go to the carry table.  The
    // companion buffer is wiped over exactly this block's row range.
    detail::BoundaryCarry<T>& carry = carries[static_cast<std::size_t>(block)];
    if (y_se == 0) {
      carry.count = 1;
      carry.row[0] = y_bs;
      carry.sum[0] = partials[0];
    } else {
      carry.count = 2;
      carry.row[0] = y_bs;
      carry.sum[0] = partials[0];
      for (index_t r = 1; r < y_se; ++r) {
        y[static_cast<std::size_t>(y_bs + r)] = partials[r];
      }
      carry.row[1] = y_be;
      carry.sum[1] = partials[y_se];
    }
    for (index_t r = y_bs; r < y_be; ++r) {
      z[static_cast<std::size_t>(r)] = T(0);
    }
  };

  parallel_for_index(pool, blocks, run_block);

  // Boundary rows fold in ascending block order — the only cross-block
  // combination, and the reason thread count cannot change a single bit.
  for (index_t b = 0; b < blocks; ++b) {
    const detail::BoundaryCarry<T>& carry = carries[static_cast<std::size_t>(b)];
    for (int e = 0; e < carry.count; ++e) {
      if (carry.row[e] < a.n_rows) {
        y[static_cast<std::size_t>(carry.row[e])] += carry.sum[e];
      }
    }
  }

  if (trace != nullptr) {
    for (index_t b = 0; b < blocks; ++b) {
      trace->fast_tiles += counters[static_cast<std::size_t>(b)].fast;
      trace->normal_tiles += counters[static_cast<std::size_t>(b)].normal;
      trace->skipped_tiles += counters[static_cast<std::size_t>(b)].skipped;
      if (trace->collect_deposits) {
        auto& d = block_deposits[static_cast<std::size_t>(b)];
        trace->deposits.insert(trace->deposits.end(), d.begin(), d.end());
      }
    }
  }

  out.flip();
}

}  // namespace merbit
