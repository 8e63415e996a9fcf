// Command-line harness: ingest, validate, benchmark, sigma sweeps, and the
// two iterative workloads, with CSV/JSON output for external tooling.
//
// Exit codes: 0 success; 2 validation failure; 3 I/O or malformed input;
// 4 infeasible or invalid configuration; 5 solver breakdown.  CLI usage
// errors keep CLI11's own (distinct) codes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "merbit/backend.hpp"
#include "merbit/bench_record.hpp"
#include "merbit/fixtures.hpp"
#include "merbit/matrix_market.hpp"
#include "merbit/metrics.hpp"
#include "merbit/random.hpp"
#include "merbit/solvers.hpp"

namespace {

using namespace merbit;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitInput = 3;
constexpr int kExitConfig = 4;
constexpr int kExitBreakdown = 5;

ScalarPrecision parse_precision(const std::string& s) {
  if (s == "f32") return ScalarPrecision::f32;
  if (s == "f64") return ScalarPrecision::f64;
  throw config_error("unknown precision '" + s + "' (expected f32 or f64)");
}

template <typename Fn>
int with_precision(ScalarPrecision p, Fn&& fn) {
  if (p == ScalarPrecision::f32) return fn(static_cast<float*>(nullptr));
  return fn(static_cast<double*>(nullptr));
}

std::string dataset_id(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Writes to --out when given, stdout otherwise.
struct OutputSink {
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw io_error("cannot write '" + path + "'");
      out = &file;
    }
  }
  std::ofstream file;
  std::ostream* out = &std::cout;
};

// Options shared by every matrix-consuming verb.
struct KernelOptions {
  std::string precision = "f64";
  int omega = 32;
  std::optional<int> sigma;
  std::optional<int> block_size;
  int threads = 1;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd, bool with_seed = true) {
    cmd->add_option("--precision", precision, "Value precision")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    cmd->add_option("--omega", omega, "Lanes per warp")
        ->capture_default_str();
    cmd->add_option("--sigma", sigma,
                    "Steps per lane (default: 14 for f32, 7 for f64)");
    cmd->add_option("--block-size", block_size,
                    "Lanes per block (default: 4*omega)");
    cmd->add_option("--threads", threads, "Worker pool size")
        ->envname("MERBIT_THREADS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_seed) {
      cmd->add_option("--seed", seed, "Seed for generated vectors")
          ->capture_default_str();
    }
  }

  SimtConfig config() const {
    const ScalarPrecision p = parse_precision(precision);
    const int s = select_sigma(p, sigma);
    return SimtConfig::make(omega, s, block_size.value_or(4 * omega));
  }

  std::unique_ptr<ThreadPool> pool() const {
    return threads > 1 ? std::make_unique<ThreadPool>(threads) : nullptr;
  }
};

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

template <typename T>
bool validate_one_config(const CsrMatrix<T>& a, const CooTriples& normalized,
                         const SimtConfig& c, ThreadPool* pool,
                         std::uint64_t seed) {
  const std::string tag = "(" + std::string(precision_name(
                              sizeof(T) == 4 ? ScalarPrecision::f32
                                             : ScalarPrecision::f64)) +
                          ", omega=" + std::to_string(c.omega) +
                          ", sigma=" + std::to_string(c.sigma) + ") ";
  bool ok = true;
  const auto report = [&](bool pass, const std::string& what) {
    std::cout << (pass ? "[ok]   " : "[FAIL] ") << tag << what << '\n';
    ok = ok && pass;
  };

  const TileMetadata t = generate_tile(a, c);

  // Path fidelity: descriptor decode equals the one-step-at-a-time walk.
  const auto decoded = reconstruct_path(t, c);
  const auto walked =
      sequential_path(std::span<const index_t>(a.row_offsets), a.n_rows,
                      a.nnz());
  report(decoded == walked, "path reconstruction matches sequential walk");

  // Descriptor packing is invertible on every lane.
  bool round_trip = true;
  for (std::uint32_t word : t.lane_desc) {
    round_trip =
        round_trip && pack_descriptor(unpack_descriptor({word}, c), c).word ==
                          word;
  }
  report(round_trip, "lane descriptors round-trip");

  // Three-way product agreement within the componentwise bound.
  const auto x = seed_test_vector<T>(a.n_cols, -1.0, 1.0, seed);
  const auto want = spmv_csr_reference(a, std::span<const T>(x));
  const auto coo_y = spmv_coo_reference<T>(normalized, std::span<const T>(x));
  report(std::memcmp(want.data(), coo_y.data(), want.size() * sizeof(T)) == 0,
         "coo and csr references agree bitwise");

  const auto bound = spmv_error_bound(a, std::span<const T>(x));
  const auto within = [&](const std::vector<T>& got) {
    for (std::size_t i = 0; i < got.size(); ++i) {
      const double diff =
          std::abs(static_cast<double>(got[i]) - static_cast<double>(want[i]));
      if (!(diff <= bound[i])) return false;
    }
    return true;
  };
  const auto merge_y = spmv_merge_runtime(a, std::span<const T>(x), c, pool);
  report(within(merge_y), "merge-runtime product within error bound");
  DualBuffer<T> buf(a.n_rows);
  spmv_merbit(a, t, c, std::span<const T>(x), buf, pool);
  report(within(buf.last_output()), "descriptor product within error bound");
  return ok;
}

int cmd_validate(const std::string& matrix_path, const KernelOptions& opts,
                 bool explicit_config, bool explicit_precision,
                 const std::string& tile_cache_path) {
  const CooTriples raw = load_matrix_any(matrix_path);
  const CooTriples normalized = normalize_coo(raw);
  auto pool = opts.pool();

  std::vector<ScalarPrecision> precisions;
  if (explicit_precision || explicit_config) {
    precisions.push_back(parse_precision(opts.precision));
  } else {
    precisions = {ScalarPrecision::f32, ScalarPrecision::f64};
  }

  bool ok = true;
  for (ScalarPrecision p : precisions) {
    std::vector<SimtConfig> configs;
    if (explicit_config) {
      KernelOptions chosen = opts;
      chosen.precision = precision_name(p);
      configs.push_back(chosen.config());
    } else {
      configs = {SimtConfig::make(32, 14, 128), SimtConfig::make(32, 7, 128),
                 SimtConfig::make(4, 4, 16)};
    }
    with_precision(p, [&](auto* tag) {
      using T = std::remove_pointer_t<decltype(tag)>;
      const CsrMatrix<T> a = coo_to_csr<T>(raw);
      for (const SimtConfig& c : configs) {
        ok = validate_one_config<T>(a, normalized, c, pool.get(), opts.seed) &&
             ok;
      }
      return 0;
    });
  }

  if (!tile_cache_path.empty()) {
    const TileCacheContents cached = read_tile_cache(tile_cache_path);
    const SimtConfig c = SimtConfig::make(cached.tile.omega, cached.tile.sigma,
                                          4 * cached.tile.omega);
    // Surface corruption: the decode validates every lane start and the
    // terminal coordinate against the cached arrays.
    const auto decoded = reconstruct_path(cached.tile, c);
    const auto walked = sequential_path(
        std::span<const index_t>(
            coo_to_csr<double>(raw).row_offsets),
        raw.n_rows, static_cast<index_t>(normalized.entries.size()));
    const bool pass = decoded == walked;
    std::cout << (pass ? "[ok]   " : "[FAIL] ") << "tile cache '"
              << tile_cache_path << "' reproduces the merge path\n";
    ok = ok && pass;
  }

  std::cout << (ok ? "validation passed" : "validation FAILED") << " for "
            << dataset_id(matrix_path) << '\n';
  return ok ? 0 : kExitValidation;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

template <typename T>
double mean_apply_seconds(SpmvBackend<T>& backend, std::span<const T> x,
                          int iters, int warmup) {
  for (int i = 0; i < warmup; ++i) backend.apply(x);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < iters; ++i) backend.apply(x);
  return detail::seconds_since(t0) / iters;
}

BackendKind kind_from_name(const std::string& name) {
  if (name == "coo") return BackendKind::coo;
  if (name == "csr") return BackendKind::csr;
  if (name == "merge") return BackendKind::merge;
  if (name == "merbit") return BackendKind::merbit;
  throw config_error("unknown kernel id '" + name + "'");
}

void emit_records(const std::vector<BenchRecord>& records,
                  const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << json(records).dump(2) << '\n';
    return;
  }
  out << bench_csv_header() << '\n';
  for (const BenchRecord& r : records) out << emit_csv(r) << '\n';
}

int cmd_bench(const std::string& matrix_path, const KernelOptions& opts,
              const std::vector<std::string>& kernels, int iters, int warmup,
              const std::string& format, const std::string& out_path) {
  if (iters < 1) throw config_error("--iters must be at least 1");
  const CooTriples raw = load_matrix_any(matrix_path);
  const CooTriples normalized = normalize_coo(raw);
  const ScalarPrecision p = parse_precision(opts.precision);
  const SimtConfig c = opts.config();
  auto pool = opts.pool();

  std::vector<BenchRecord> records;
  with_precision(p, [&](auto* tag) {
    using T = std::remove_pointer_t<decltype(tag)>;
    const CsrMatrix<T> a = coo_to_csr<T>(raw);
    const auto x = seed_test_vector<T>(a.n_cols, -1.0, 1.0, opts.seed);
    const DegreeStats degrees = degree_stats(a, select_sigma(p));

    // The COO baseline is always measured in-process: every speedup column
    // refers to it, including its own (1.0 by construction).
    const double coo_mean = [&] {
      CooReferenceBackend<T> coo_backend(normalized);
      return mean_apply_seconds<T>(coo_backend, std::span<const T>(x), iters,
                                   warmup);
    }();

    for (const std::string& name : kernels) {
      const BackendKind kind = kind_from_name(name);
      auto backend = make_backend<T>(kind, a, normalized, c, pool.get());
      const double mean =
          kind == BackendKind::coo
              ? coo_mean
              : mean_apply_seconds<T>(*backend, std::span<const T>(x), iters,
                                      warmup);
      BenchRecord r;
      r.dataset = dataset_id(matrix_path);
      r.kernel = name;
      r.precision = precision_name(p);
      if (kind == BackendKind::merge || kind == BackendKind::merbit) {
        r.omega = c.omega;
        r.sigma = c.sigma;
        r.block_size = c.block_size;
      }
      r.iterations = iters;
      r.nnz = a.nnz();
      r.mean_seconds = mean;
      r.baseline_seconds = coo_mean;
      r.ct = computational_throughput(a.nnz(), mean);
      r.speedup = speedup(coo_mean, mean);
      r.preprocess_seconds = backend->preprocess_seconds();
      r.degree_group = degrees.low_degree ? "G-L" : "G-H";
      if (kind == BackendKind::merbit) {
        const auto& tile =
            static_cast<const MerbitBackend<T>&>(*backend).tile();
        r.long_row_fraction = long_row_fraction(tile);
        r.metadata_bytes =
            metadata_footprint(a.nnz(), a.n_rows, c, r.long_row_fraction);
        std::cerr << "note: merbit preprocessing cost = "
                  << (mean > 0 ? r.preprocess_seconds / mean : 0.0)
                  << "x one multiply (informational reference point: 1.29)\n";
      }
      records.push_back(std::move(r));
    }
    return 0;
  });

  OutputSink sink(out_path);
  emit_records(records, format, *sink.out);
  return 0;
}

// ---------------------------------------------------------------------------
// sigma-sweep
// ---------------------------------------------------------------------------

std::vector<int> parse_sigma_list(const std::string& text) {
  std::vector<int> sigmas;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto dash = token.find('-', 1);  // allow plain negatives to fail
    try {
      if (dash == std::string::npos) {
        sigmas.push_back(std::stoi(token));
      } else {
        const int lo = std::stoi(token.substr(0, dash));
        const int hi = std::stoi(token.substr(dash + 1));
        if (hi < lo) throw config_error("empty sigma range '" + token + "'");
        for (int s = lo; s <= hi; ++s) sigmas.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw config_error("bad sigma list entry '" + token + "'");
    }
  }
  if (sigmas.empty()) throw config_error("empty sigma list");
  return sigmas;
}

struct SweepRow {
  int sigma = 0;
  bool feasible = false;
  bool validated = false;
  double speedup_vs_coo = 0.0;
  double r_f = 0.0;
  double metadata_bytes = 0.0;
  double smem_bytes = 0.0;
  double mean_seconds = 0.0;
  double preprocess_seconds = 0.0;
  std::string note;
};

void to_json(json& j, const SweepRow& r) {
  j = json{{"sigma", r.sigma},
           {"feasible", r.feasible},
           {"validated", r.validated},
           {"speedup_vs_coo", r.speedup_vs_coo},
           {"r_f", r.r_f},
           {"metadata_bytes", r.metadata_bytes},
           {"smem_bytes", r.smem_bytes},
           {"mean_seconds", r.mean_seconds},
           {"preprocess_seconds", r.preprocess_seconds},
           {"note", r.note}};
}

int cmd_sigma_sweep(const std::string& matrix_path, const KernelOptions& opts,
                    const std::string& sigma_list, int iters, int warmup,
                    const std::string& format, const std::string& out_path) {
  if (iters < 1) throw config_error("--iters must be at least 1");
  const CooTriples raw = load_matrix_any(matrix_path);
  const CooTriples normalized = normalize_coo(raw);
  const ScalarPrecision p = parse_precision(opts.precision);
  auto pool = opts.pool();

  std::vector<SweepRow> rows;
  bool any_feasible = false;
  bool all_validated = true;

  with_precision(p, [&](auto* tag) {
    using T = std::remove_pointer_t<decltype(tag)>;
    const CsrMatrix<T> a = coo_to_csr<T>(raw);
    const auto x = seed_test_vector<T>(a.n_cols, -1.0, 1.0, opts.seed);
    const auto want = spmv_csr_reference(a, std::span<const T>(x));
    const auto bound = spmv_error_bound(a, std::span<const T>(x));

    const double coo_mean = [&] {
      CooReferenceBackend<T> coo_backend(normalized);
      return mean_apply_seconds<T>(coo_backend, std::span<const T>(x), iters,
                                   warmup);
    }();

    for (int sigma : parse_sigma_list(sigma_list)) {
      SweepRow row;
      row.sigma = sigma;
      SimtConfig c;
      try {
        c = SimtConfig::make(opts.omega, sigma,
                             opts.block_size.value_or(4 * opts.omega));
      } catch (const config_error& e) {
        row.note = e.what();
        std::cerr << "sigma=" << sigma << " rejected: " << e.what() << '\n';
        rows.push_back(std::move(row));
        continue;
      }
      row.feasible = true;
      any_feasible = true;

      MerbitBackend<T> backend(a, c, pool.get());
      // Correctness is re-established at every sigma before timing counts.
      const auto& y = backend.apply(std::span<const T>(x));
      row.validated = true;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double diff = std::abs(static_cast<double>(y[i]) -
                                     static_cast<double>(want[i]));
        if (!(diff <= bound[i])) {
          row.validated = false;
          break;
        }
      }
      all_validated = all_validated && row.validated;

      row.mean_seconds =
          mean_apply_seconds<T>(backend, std::span<const T>(x), iters, warmup);
      row.preprocess_seconds = backend.preprocess_seconds();
      row.speedup_vs_coo = speedup(coo_mean, row.mean_seconds);
      row.r_f = long_row_fraction(backend.tile());
      row.metadata_bytes = metadata_footprint(a.nnz(), a.n_rows, c, row.r_f);
      row.smem_bytes = shared_memory_bytes(c, sizeof(T));
      rows.push_back(std::move(row));
    }
    return 0;
  });

  OutputSink sink(out_path);
  if (format == "json") {
    *sink.out << json(rows).dump(2) << '\n';
  } else {
    *sink.out << "sigma,feasible,validated,speedup_vs_coo,r_f,metadata_bytes,"
                 "smem_bytes,mean_seconds,preprocess_seconds,note\n";
    for (const SweepRow& r : rows) {
      *sink.out << r.sigma << ',' << (r.feasible ? 1 : 0) << ','
                << (r.validated ? 1 : 0) << ','
                << detail::exact_double(r.speedup_vs_coo) << ','
                << detail::exact_double(r.r_f) << ','
                << detail::exact_double(r.metadata_bytes) << ','
                << detail::exact_double(r.smem_bytes) << ','
                << detail::exact_double(r.mean_seconds) << ','
                << detail::exact_double(r.preprocess_seconds) << ','
                << r.note << '\n';
    }
  }
  if (!any_feasible) throw config_error("no feasible sigma in the sweep");
  return all_validated ? 0 : kExitValidation;
}

// ---------------------------------------------------------------------------
// pagerank / bicgstab
// ---------------------------------------------------------------------------

int cmd_pagerank(const std::string& matrix_path, const KernelOptions& opts,
                 const std::string& backend_name, double damping,
                 double err_tol, index_t max_iters, index_t reference_iters,
                 const std::string& out_path) {
  const CooTriples raw = load_matrix_any(matrix_path);
  const ScalarPrecision p = parse_precision(opts.precision);
  const SimtConfig c = opts.config();
  auto pool = opts.pool();

  return with_precision(p, [&](auto* tag) {
    using T = std::remove_pointer_t<decltype(tag)>;
    const CsrMatrix<T> adjacency = coo_to_csr<T>(raw);
    const CsrMatrix<T> transition = build_transition(adjacency);
    const CooTriples transition_coo = csr_to_coo(transition);
    auto backend = make_backend<T>(kind_from_name(backend_name), transition,
                                   transition_coo, c, pool.get());
    PageRankConfig<T> cfg;
    cfg.damping = static_cast<T>(damping);
    cfg.err_tol = static_cast<T>(err_tol);
    cfg.max_iters = max_iters;
    cfg.reference_iters = reference_iters;
    const PageRankResult<T> result = pagerank<T>(transition, cfg, *backend);

    const json report = {{"workload", "pagerank"},
                         {"dataset", dataset_id(matrix_path)},
                         {"backend", backend_name},
                         {"precision", precision_name(p)},
                         {"vertices", transition.n_rows},
                         {"edges", transition.nnz()},
                         {"iterations", result.iterations},
                         {"final_err", result.final_err},
                         {"status", solve_status_name(result.status)},
                         {"preprocess_seconds", result.preprocess_seconds},
                         {"iterate_seconds", result.iterate_seconds}};
    OutputSink sink(out_path);
    *sink.out << report.dump(2) << '\n';
    return result.status == SolveStatus::breakdown ? kExitBreakdown : 0;
  });
}

int cmd_bicgstab(const std::string& matrix_path, const KernelOptions& opts,
                 const std::string& backend_name, double tol,
                 index_t max_iters, const std::string& out_path) {
  const CooTriples raw = load_matrix_any(matrix_path);
  const ScalarPrecision p = parse_precision(opts.precision);
  const SimtConfig c = opts.config();
  auto pool = opts.pool();

  return with_precision(p, [&](auto* tag) {
    using T = std::remove_pointer_t<decltype(tag)>;
    const CsrMatrix<T> a = coo_to_csr<T>(raw);
    const CooTriples normalized = normalize_coo(raw);
    auto backend = make_backend<T>(kind_from_name(backend_name), a, normalized,
                                   c, pool.get());
    const auto b = seed_test_vector<T>(a.n_rows, -1.0, 1.0, opts.seed);
    BicgstabConfig<T> cfg;
    cfg.tol = static_cast<T>(tol);
    cfg.max_iters = max_iters;
    const BicgstabResult<T> result =
        bicgstab<T>(a, std::span<const T>(b), cfg, *backend);

    json report = {{"workload", "bicgstab"},
                   {"dataset", dataset_id(matrix_path)},
                   {"backend", backend_name},
                   {"precision", precision_name(p)},
                   {"rows", a.n_rows},
                   {"nnz", a.nnz()},
                   {"iterations", result.iterations},
                   {"final_residual", result.final_residual},
                   {"status", solve_status_name(result.status)},
                   {"preprocess_seconds", result.preprocess_seconds},
                   {"iterate_seconds", result.iterate_seconds}};
    if (result.status == SolveStatus::breakdown) {
      report["breakdown"] = result.breakdown_reason;
    }
    OutputSink sink(out_path);
    *sink.out << report.dump(2) << '\n';
    return result.status == SolveStatus::breakdown ? kExitBreakdown : 0;
  });
}

// ---------------------------------------------------------------------------
// convert / gen
// ---------------------------------------------------------------------------

int cmd_convert(const std::string& matrix_path, const std::string& out_path,
                const std::string& tile_path, const KernelOptions& opts) {
  const CooTriples raw = load_matrix_any(matrix_path);
  write_matrix_cache(out_path, normalize_coo(raw));
  std::cout << "wrote matrix cache " << out_path << '\n';
  if (!tile_path.empty()) {
    const ScalarPrecision p = parse_precision(opts.precision);
    const SimtConfig c = opts.config();
    with_precision(p, [&](auto* tag) {
      using T = std::remove_pointer_t<decltype(tag)>;
      const CsrMatrix<T> a = coo_to_csr<T>(raw);
      write_tile_cache(tile_path, generate_tile(a, c), p);
      return 0;
    });
    std::cout << "wrote tile cache " << tile_path << '\n';
  }
  return 0;
}

int cmd_gen(const std::string& fixture, const std::string& out_path,
            index_t grid, index_t nodes, index_t chords, index_t width,
            std::uint64_t seed) {
  CsrMatrix<double> a;
  if (fixture == "walkthrough") {
    a = walkthrough_fixture<double>();
  } else if (fixture == "laplacian") {
    a = five_point_laplacian<double>(grid);
  } else if (fixture == "ring") {
    a = ring_with_chords<double>(nodes, chords, seed);
  } else if (fixture == "dense-row") {
    a = single_dense_row_fixture<double>(width, seed);
  } else if (fixture == "singular") {
    a = singular_diagonal_fixture<double>();
  } else {
    throw config_error("unknown fixture '" + fixture + "'");
  }
  write_matrix_market_file(out_path, csr_to_coo(a));
  std::cout << "wrote " << a.n_rows << "x" << a.n_cols << " matrix ("
            << a.nnz() << " nonzeros) to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse SpMV toolkit: descriptor-driven kernel, baselines, "
               "and iterative workloads"};
  app.require_subcommand(1);

  // validate ----------------------------------------------------------------
  auto* validate = app.add_subcommand(
      "validate", "Check kernel agreement, path fidelity, and descriptors");
  std::string v_matrix, v_tile;
  KernelOptions v_opts;
  validate->add_option("matrix", v_matrix, "Matrix Market file or cache")
      ->required();
  v_opts.attach(validate);
  validate->add_option("--tile", v_tile, "Tile cache to cross-check");

  // bench -------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Time SpMV kernels");
  std::string b_matrix, b_format = "csv", b_out;
  std::vector<std::string> b_kernels = {"coo", "csr", "merge", "merbit"};
  int b_iters = 400, b_warmup = 10;
  KernelOptions b_opts;
  bench->add_option("matrix", b_matrix, "Matrix Market file or cache")
      ->required();
  bench->add_option("--kernels", b_kernels, "Kernels to time")
      ->delimiter(',')
      ->check(CLI::IsMember({"coo", "csr", "merge", "merbit"}))
      ->capture_default_str();
  bench->add_option("--iters", b_iters, "Timed iterations per kernel")
      ->capture_default_str();
  bench->add_option("--warmup", b_warmup, "Untimed warmup iterations")
      ->capture_default_str();
  bench->add_option("--format", b_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench->add_option("--out", b_out, "Write output to a file");
  b_opts.attach(bench);

  // sigma-sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sigma-sweep", "Sweep sigma: feasibility, correctness, speedup");
  std::string s_matrix, s_sigmas = "1-14", s_format = "csv", s_out;
  int s_iters = 50, s_warmup = 5;
  KernelOptions s_opts;
  sweep->add_option("matrix", s_matrix, "Matrix Market file or cache")
      ->required();
  sweep->add_option("--sigmas", s_sigmas, "List/range, e.g. 4,7,14 or 1-20")
      ->capture_default_str();
  sweep->add_option("--iters", s_iters, "Timed iterations per sigma")
      ->capture_default_str();
  sweep->add_option("--warmup", s_warmup, "Untimed warmup iterations")
      ->capture_default_str();
  sweep->add_option("--format", s_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--out", s_out, "Write output to a file");
  s_opts.attach(sweep);
  // --sigma makes no sense here; drop it from the shared set.
  sweep->remove_option(sweep->get_option("--sigma"));

  // pagerank ------------------------------------------------------------------
  auto* pr = app.add_subcommand(
      "pagerank", "Damped power iteration on an adjacency pattern");
  std::string p_matrix, p_backend = "merbit", p_out;
  double p_damping = 0.85, p_err_tol = 1e-10;
  index_t p_max_iters = 210, p_reference_iters = 210;
  KernelOptions p_opts;
  pr->add_option("matrix", p_matrix, "Adjacency pattern (Matrix Market)")
      ->required();
  pr->add_option("--backend", p_backend, "Multiply engine")
      ->check(CLI::IsMember({"coo", "csr", "merge", "merbit"}))
      ->capture_default_str();
  pr->add_option("--damping", p_damping, "Damping factor c")
      ->capture_default_str();
  pr->add_option("--err-tol", p_err_tol, "Relative error tolerance")
      ->capture_default_str();
  pr->add_option("--max-iters", p_max_iters, "Iteration cap")
      ->capture_default_str();
  pr->add_option("--reference-iters", p_reference_iters,
                 "Yardstick power-iteration count")
      ->capture_default_str();
  pr->add_option("--out", p_out, "Write the JSON report to a file");
  p_opts.attach(pr, /*with_seed=*/false);

  // bicgstab ------------------------------------------------------------------
  auto* bi = app.add_subcommand(
      "bicgstab", "Stabilized bi-conjugate gradient solve of A*x = b");
  std::string c_matrix, c_backend = "merbit", c_out;
  double c_tol = 1e-10;
  index_t c_max_iters = 20000;
  KernelOptions c_opts;
  bi->add_option("matrix", c_matrix, "Square system matrix")->required();
  bi->add_option("--backend", c_backend, "Multiply engine")
      ->check(CLI::IsMember({"coo", "csr", "merge", "merbit"}))
      ->capture_default_str();
  bi->add_option("--tol", c_tol, "Relative true-residual tolerance")
      ->capture_default_str();
  bi->add_option("--max-iters", c_max_iters, "Iteration cap")
      ->capture_default_str();
  bi->add_option("--out", c_out, "Write the JSON report to a file");
  c_opts.attach(bi);

  // convert -------------------------------------------------------------------
  auto* convert = app.add_subcommand(
      "convert", "Write binary matrix (and optional tile) caches");
  std::string x_matrix, x_out, x_tile;
  KernelOptions x_opts;
  convert->add_option("matrix", x_matrix, "Matrix Market file or cache")
      ->required();
  convert->add_option("--out", x_out, "Matrix cache path")->required();
  convert->add_option("--tile", x_tile, "Also write a tile cache here");
  x_opts.attach(convert, /*with_seed=*/false);

  // gen -----------------------------------------------------------------------
  auto* gen = app.add_subcommand(
      "gen", "Write a built-in fixture as a Matrix Market file");
  std::string g_fixture, g_out;
  index_t g_grid = 8, g_nodes = 100, g_chords = 260, g_width = 64;
  std::uint64_t g_seed = 1;
  gen->add_option("fixture", g_fixture,
                  "walkthrough | laplacian | ring | dense-row | singular")
      ->required();
  gen->add_option("--out", g_out, "Output path")->required();
  gen->add_option("--grid", g_grid, "Grid side (laplacian)")
      ->capture_default_str();
  gen->add_option("--nodes", g_nodes, "Vertex count (ring)")
      ->capture_default_str();
  gen->add_option("--chords", g_chords, "Extra edges (ring)")
      ->capture_default_str();
  gen->add_option("--width", g_width, "Column count (dense-row)")
      ->capture_default_str();
  gen->add_option("--seed", g_seed, "Fixture seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) {
      const bool explicit_config =
          validate->count("--omega") || validate->count("--sigma") ||
          validate->count("--block-size");
      return cmd_validate(v_matrix, v_opts, explicit_config,
                          validate->count("--precision") > 0, v_tile);
    }
    if (bench->parsed()) {
      return cmd_bench(b_matrix, b_opts, b_kernels, b_iters, b_warmup,
                       b_format, b_out);
    }
    if (sweep->parsed()) {
      return cmd_sigma_sweep(s_matrix, s_opts, s_sigmas, s_iters, s_warmup,
                             s_format, s_out);
    }
    if (pr->parsed()) {
      return cmd_pagerank(p_matrix, p_opts, p_backend, p_damping, p_err_tol,
                          p_max_iters, p_reference_iters, p_out);
    }
    if (bi->parsed()) {
      return cmd_bicgstab(c_matrix, c_opts, c_backend, c_tol, c_max_iters,
                          c_out);
    }
    if (convert->parsed()) {
      return cmd_convert(x_matrix, x_out, x_tile, x_opts);
    }
    if (gen->parsed()) {
      return cmd_gen(g_fixture, g_out, g_grid, g_nodes, g_chords, g_width,
                     g_seed);
    }
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const corruption_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const dimension_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
