#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "merbit/fixtures.hpp"
#include "merbit/reference.hpp"
#include "merbit/solvers.hpp"
#include "support/generators.hpp"

using namespace merbit;

namespace {

const SimtConfig kConfig = SimtConfig::make(32, 7, 128);

template <typename T>
std::unique_ptr<SpmvBackend<T>> backend_for(const CsrMatrix<T>& a,
                                            BackendKind kind) {
  static CooTriples unused;  // csr/merge/merbit backends ignore the triples
  return make_backend<T>(kind, a, unused, kConfig, nullptr);
}

}  // namespace

TEST_CASE("transition matrix is column-stochastic with uniform weights") {
  const auto adjacency = ring_with_chords<double>(50, 120, 7);
  const auto p = build_transition(adjacency);
  REQUIRE(p.n_rows == 50);
  REQUIRE(p.nnz() == adjacency.nnz());
  std::vector<double> column_sum(50, 0.0);
  for (index_t i = 0; i < p.n_rows; ++i) {
    for (index_t k = p.row_offsets[static_cast<std::size_t>(i)];
         k < p.row_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
      const auto j = static_cast<std::size_t>(
          p.col_indices[static_cast<std::size_t>(k)]);
      column_sum[j] += p.values[static_cast<std::size_t>(k)];
      // Every weight in column j is exactly 1/outdeg(j).
      const index_t outdeg =
          adjacency.row_offsets[j + 1] - adjacency.row_offsets[j];
      CHECK(p.values[static_cast<std::size_t>(k)] ==
            1.0 / static_cast<double>(outdeg));
    }
  }
  for (index_t j = 0; j < 50; ++j) {
    const auto outdeg = adjacency.row_offsets[static_cast<std::size_t>(j) + 1] -
                        adjacency.row_offsets[static_cast<std::size_t>(j)];
    if (outdeg == 0) {
      CHECK(column_sum[static_cast<std::size_t>(j)] == 0.0);
    } else {
      CHECK(column_sum[static_cast<std::size_t>(j)] ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(
      build_transition(single_dense_row_fixture<double>(4, 1)),
      dimension_error);
}

TEST_CASE("two-vertex cycle: the uniform vector is an exact fixed point") {
  CooTriples edges;
  edges.n_rows = edges.n_cols = 2;
  edges.entries = {{0, 1, 1.0}, {1, 0, 1.0}};
  const auto p = build_transition(coo_to_csr<double>(edges));
  auto backend = backend_for<double>(p, BackendKind::csr);
  const auto result = pagerank<double>(p, {}, *backend);
  CHECK(result.status == SolveStatus::converged);
  CHECK(result.iterations == 1);
  CHECK(result.pi == std::vector<double>{0.5, 0.5});
  CHECK(result.reference_pi == result.pi);
  CHECK(result.final_err == 0.0);
}

TEST_CASE("dangling vertices redistribute their mass uniformly") {
  // 0 -> 1 and 1 has no out-edges: column 1 of the transition is empty,
  // yet every iterate must remain a probability vector.
  CooTriples edges;
  edges.n_rows = edges.n_cols = 2;
  edges.entries = {{0, 1, 1.0}};
  const auto p = build_transition(coo_to_csr<double>(edges));
  auto backend = backend_for<double>(p, BackendKind::csr);
  index_t observed = 0;
  const auto result = pagerank<double>(
      p, {}, *backend,
      [&](index_t, const std::vector<double>& pi, double) {
        double mass = 0.0;
        for (double v : pi) mass += v;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
        ++observed;
      });
  CHECK(result.status == SolveStatus::converged);
  CHECK(observed == result.iterations);
  // Fixed point: pi0 = base, pi1 = c*pi0 + base, with
  // base = (c*pi1 + 1 - c) / 2.  Eliminating base gives pi0 = 1/(2+c).
  const double c = 0.85;
  CHECK(result.pi[0] == doctest::Approx(1.0 / (2.0 + c)).epsilon(1e-10));
  CHECK(result.pi[1] == doctest::Approx((1.0 + c) / (2.0 + c)).epsilon(1e-10));
}

TEST_CASE("pagerank on a strongly connected graph, every backend") {
  const auto adjacency = ring_with_chords<double>(100, 260, 42);
  const auto p = build_transition(adjacency);
  std::map<BackendKind, std::vector<double>> answers;
  for (BackendKind kind :
       {BackendKind::csr, BackendKind::merge, BackendKind::merbit}) {
    auto backend = backend_for<double>(p, kind);
    const auto result = pagerank<double>(p, {}, *backend);
    CAPTURE(backend_kind_name(kind));
    CHECK(result.status == SolveStatus::converged);
    CHECK(result.iterations <= 210);
    CHECK(result.final_err < 1e-10);
    CHECK(result.iterate_seconds >= 0.0);
    answers[kind] = result.pi;
  }
  // Deterministic kernels: the iterates agree across backends to 1e-12
  // relative, far inside the per-step tolerance accumulation.
  const auto& reference = answers[BackendKind::csr];
  for (const auto& [kind, pi] : answers) {
    for (std::size_t i = 0; i < pi.size(); ++i) {
      CHECK(std::abs(pi[i] - reference[i]) <= 1e-12 * std::abs(reference[i]));
    }
  }
}

TEST_CASE("pagerank rejects bad configs and degenerate inputs") {
  const auto p = build_transition(
      ring_with_chords<double>(8, 4, 3));
  auto backend = backend_for<double>(p, BackendKind::csr);
  PageRankConfig<double> bad;
  bad.damping = 1.5;
  CHECK_THROWS_AS(pagerank<double>(p, bad, *backend), config_error);
  bad = {};
  bad.err_tol = 0.0;
  CHECK_THROWS_AS(pagerank<double>(p, bad, *backend), config_error);
  CHECK_THROWS_AS(
      pagerank<double>(single_dense_row_fixture<double>(4, 1), {}, *backend),
      dimension_error);
}

TEST_CASE("bicgstab solves the five-point Laplacian") {
  const auto a = five_point_laplacian<double>(8);  // 64 x 64, SPD
  const auto b = seed_test_vector<double>(a.n_rows, -1.0, 1.0, 97);
  for (BackendKind kind :
       {BackendKind::csr, BackendKind::merge, BackendKind::merbit}) {
    auto backend = backend_for<double>(a, kind);
    const auto result =
        bicgstab<double>(a, std::span<const double>(b), {}, *backend);
    CAPTURE(backend_kind_name(kind));
    REQUIRE(result.status == SolveStatus::converged);
    CHECK(result.final_residual < 1e-10);
    CHECK(result.residual_history.size() ==
          static_cast<std::size_t>(result.iterations));
    CHECK(result.residual_history.back() == result.final_residual);

    // The reported residual survives independent recomputation.
    const auto ax = spmv_csr_reference(a, std::span<const double>(result.x));
    double rr = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      rr += (ax[i] - b[i]) * (ax[i] - b[i]);
      bb += b[i] * b[i];
    }
    const double recomputed = std::sqrt(rr / bb);
    CHECK(std::abs(recomputed - result.final_residual) <= 1e-12);
  }
}

TEST_CASE("bicgstab reports breakdown on a singular system") {
  // diag(1, 0) with b = (1, 1): the second velocity vector A*p is exactly
  // zero, so <r_hat, v> vanishes at iteration 2.
  const auto a = singular_diagonal_fixture<double>();
  const std::vector<double> b = {1.0, 1.0};
  auto backend = backend_for<double>(a, BackendKind::csr);
  const auto result =
      bicgstab<double>(a, std::span<const double>(b), {}, *backend);
  CHECK(result.status == SolveStatus::breakdown);
  CHECK(result.breakdown_reason == "rhat_dot_v");
  CHECK(result.iterations == 2);
}

TEST_CASE("bicgstab trivial cases and dimension checks") {
  const auto a = five_point_laplacian<double>(3);
  const std::vector<double> zero(static_cast<std::size_t>(a.n_rows), 0.0);
  auto backend = backend_for<double>(a, BackendKind::csr);
  const auto result =
      bicgstab<double>(a, std::span<const double>(zero), {}, *backend);
  CHECK(result.status == SolveStatus::converged);
  CHECK(result.iterations == 0);
  CHECK(result.final_residual == 0.0);
  for (double v : result.x) CHECK(v == 0.0);

  const std::vector<double> short_b(3, 1.0);
  CHECK_THROWS_AS(
      bicgstab<double>(a, std::span<const double>(short_b), {}, *backend),
      dimension_error);
  CHECK_THROWS_AS(
      bicgstab<double>(single_dense_row_fixture<double>(4, 1),
                       std::span<const double>(short_b), {}, *backend),
      dimension_error);
}

TEST_CASE("solver status names") {
  CHECK(std::string(solve_status_name(SolveStatus::converged)) == "converged");
  CHECK(std::string(solve_status_name(SolveStatus::max_iterations)) ==
        "max_iterations");
  CHECK(std::string(solve_status_name(SolveStatus::breakdown)) == "breakdown");
}
