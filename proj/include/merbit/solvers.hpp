#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "merbit/backend.hpp"
#include "merbit/csr.hpp"
#include "merbit/reference.hpp"

namespace merbit {

enum class SolveStatus { converged, max_iterations, breakdown };

inline const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// PageRank
// ---------------------------------------------------------------------------

// Column-stochastic random-surfer transition matrix of an adjacency pattern:
// P[i][j] = 1 / outdeg(j) for every edge j -> i.  Input values are ignored
// (pattern semantics); the input must be square.  Columns of dangling
// vertices (outdeg 0) stay empty — the iteration redistributes their mass
// uniformly, which keeps every iterate a probability vector.
template <typename T>
CsrMatrix<T> build_transition(const CsrMatrix<T>& adjacency) {
  if (adjacency.n_rows != adjacency.n_cols) {
    throw dimension_error("transition matrix needs a square adjacency (" +
                          std::to_string(adjacency.n_rows) + "x" +
                          std::to_string(adjacency.n_cols) + ")");
  }
  const index_t n = adjacency.n_rows;
  CsrMatrix<T> p;
  p.n_rows = n;
  p.n_cols = n;
  p.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  // Row i of P collects the in-edges of vertex i: counting pass, then a
  // stable scatter that preserves ascending source order within each row.
  for (index_t k = 0; k < adjacency.nnz(); ++k) {
    ++p.row_offsets[static_cast<std::size_t>(
                        adjacency.col_indices[static_cast<std::size_t>(k)]) +
                    1];
  }
  for (index_t i = 0; i < n; ++i) {
    p.row_offsets[static_cast<std::size_t>(i) + 1] +=
        p.row_offsets[static_cast<std::size_t>(i)];
  }
  p.col_indices.assign(static_cast<std::size_t>(adjacency.nnz()), 0);
  p.values.assign(static_cast<std::size_t>(adjacency.nnz()), T(0));
  std::vector<index_t> cursor(p.row_offsets.begin(), p.row_offsets.end() - 1);
  for (index_t j = 0; j < n; ++j) {
    const index_t begin = adjacency.row_offsets[static_cast<std::size_t>(j)];
    const index_t end = adjacency.row_offsets[static_cast<std::size_t>(j) + 1];
    const T weight = end > begin ? T(1) / static_cast<T>(end - begin) : T(0);
    for (index_t k = begin; k < end; ++k) {
      const index_t i = adjacency.col_indices[static_cast<std::size_t>(k)];
      const index_t slot = cursor[static_cast<std::size_t>(i)]++;
      p.col_indices[static_cast<std::size_t>(slot)] = j;
      p.values[static_cast<std::size_t>(slot)] = weight;
    }
  }
  return p;
}

template <typename T>
struct PageRankConfig {
  T damping = T(0.85);
  T err_tol = T(1e-10);
  index_t max_iters = 210;
  index_t reference_iters = 210;  // power-iteration count for the yardstick
};

template <typename T>
struct PageRankResult {
  std::vector<T> pi;
  std::vector<T> reference_pi;
  index_t iterations = 0;
  double final_err = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::max_iterations;
  double preprocess_seconds = 0.0;  // backend metadata build (T_p)
  double iterate_seconds = 0.0;     // power loop including checks (T_r)
};

namespace detail {

// pi_new = damping * w + (damping * dangling_mass + 1 - damping) / n.
// Dangling mass redistributes uniformly, so ||pi_new||_1 == ||pi_old||_1.
template <typename T>
void rank_update(std::span<const T> w, const std::vector<index_t>& dangling,
                 const std::vector<T>& pi_old, T damping,
                 std::vector<T>& pi_new) {
  const index_t n = static_cast<index_t>(w.size());
  T dangling_mass = T(0);
  for (index_t j : dangling) {
    dangling_mass += pi_old[static_cast<std::size_t>(j)];
  }
  const T base =
      (damping * dangling_mass + (T(1) - damping)) / static_cast<T>(n);
  pi_new.resize(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) {
    pi_new[static_cast<std::size_t>(i)] =
        damping * w[static_cast<std::size_t>(i)] + base;
  }
}

// Componentwise relative deviation against the yardstick, infinity norm.
template <typename T>
double rank_error(const std::vector<T>& pi, const std::vector<T>& star) {
  double err = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double s = static_cast<double>(star[i]);
    const double d = static_cast<double>(pi[i]) - s;
    if (s == 0.0) {
      if (d != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    err = std::max(err, std::abs(d / s));
  }
  return err;
}

template <typename T>
std::vector<index_t> dangling_columns(const CsrMatrix<T>& p) {
  std::vector<unsigned char> seen(static_cast<std::size_t>(p.n_cols), 0);
  for (index_t k = 0; k < p.nnz(); ++k) {
    seen[static_cast<std::size_t>(
        p.col_indices[static_cast<std::size_t>(k)])] = 1;
  }
  std::vector<index_t> dangling;
  for (index_t j = 0; j < p.n_cols; ++j) {
    if (!seen[static_cast<std::size_t>(j)]) dangling.push_back(j);
  }
  return dangling;
}

}  // namespace detail

// Power iteration on the damped random surfer.  The yardstick pi* is
// computed once with the plain CSR reference at cfg.reference_iters; the
// loop then runs on `backend` until the relative infinity-norm deviation
// from pi* drops below cfg.err_tol.  `on_iteration`, when set, observes
// every iterate (used to pin the probability-mass invariant in tests).
template <typename T>
PageRankResult<T> pagerank(
    const CsrMatrix<T>& p, const PageRankConfig<T>& cfg,
    SpmvBackend<T>& backend,
    const std::function<void(index_t, const std::vector<T>&, double)>&
        on_iteration = {}) {
  if (p.n_rows != p.n_cols) {
    throw dimension_error("pagerank needs a square transition matrix");
  }
  if (p.n_rows < 1) {
    throw dimension_error("pagerank needs at least one vertex");
  }
  if (!(cfg.damping >= T(0) && cfg.damping <= T(1))) {
    throw config_error("damping must lie in [0, 1]");
  }
  if (!(cfg.err_tol > T(0))) {
    throw config_error("err_tol must be positive");
  }
  const index_t n = p.n_rows;
  const std::vector<index_t> dangling = detail::dangling_columns(p);

  PageRankResult<T> result;
  result.preprocess_seconds = backend.preprocess_seconds();

  // Yardstick: fixed-count power run on the reference kernel.
  {
    std::vector<T> pi(static_cast<std::size_t>(n),
                      T(1) / static_cast<T>(n));
    std::vector<T> w(static_cast<std::size_t>(n), T(0));
    std::vector<T> next;
    for (index_t r = 0; r < cfg.reference_iters; ++r) {
      spmv_csr_reference(p, std::span<const T>(pi), std::span<T>(w));
      detail::rank_update<T>(std::span<const T>(w), dangling, pi, cfg.damping,
                             next);
      pi.swap(next);
    }
    result.reference_pi = std::move(pi);
  }

  std::vector<T> pi(static_cast<std::size_t>(n), T(1) / static_cast<T>(n));
  std::vector<T> next;
  const auto t0 = std::chrono::steady_clock::now();
  for (index_t r = 1; r <= cfg.max_iters; ++r) {
    const std::vector<T>& w = backend.apply(std::span<const T>(pi));
    detail::rank_update<T>(std::span<const T>(w), dangling, pi, cfg.damping,
                           next);
    pi.swap(next);
    T mass = T(0);
    for (T v : pi) mass += std::abs(v);
    if (mass == T(0)) {
      throw error("pagerank: zero-norm iterate at iteration " +
                  std::to_string(r));
    }
    result.iterations = r;
    result.final_err = detail::rank_error(pi, result.reference_pi);
    if (on_iteration) on_iteration(r, pi, result.final_err);
    if (result.final_err < static_cast<double>(cfg.err_tol)) {
      result.status = SolveStatus::converged;
      break;
    }
  }
  result.iterate_seconds = detail::seconds_since(t0);
  result.pi = std::move(pi);
  return result;
}

// ---------------------------------------------------------------------------
// BiCGSTAB
// ---------------------------------------------------------------------------

template <typename T>
struct BicgstabConfig {
  T tol = T(1e-10);          // on ||A*x - b|| / ||b||, recomputed each pass
  index_t max_iters = 20000;
};

template <typename T>
struct BicgstabResult {
  std::vector<T> x;
  std::vector<double> residual_history;  // true relative residual per pass
  index_t iterations = 0;
  double final_residual = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::max_iterations;
  std::string breakdown_reason;
  double preprocess_seconds = 0.0;
  double iterate_seconds = 0.0;
};

namespace detail {

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
double norm2(std::span<const T> a) {
  double s = 0.0;
  for (T v : a) s += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(s);
}

}  // namespace detail

// Unpreconditioned BiCGSTAB (the stabilized bi-conjugate gradient
// recurrence), two multiplies per iteration plus one more for the stopping
// test, which evaluates the true residual rather than the recursive one so
// the reported value survives independent recomputation.  Breakdown (a zero
// or non-finite recurrence denominator) is reported, never looped through.
template <typename T>
BicgstabResult<T> bicgstab(const CsrMatrix<T>& a, std::span<const T> b,
                           const BicgstabConfig<T>& cfg,
                           SpmvBackend<T>& backend) {
  if (a.n_rows != a.n_cols) {
    throw dimension_error("bicgstab needs a square system");
  }
  if (static_cast<index_t>(b.size()) != a.n_rows) {
    throw dimension_error("bicgstab: right-hand side has " +
                          std::to_string(b.size()) + " entries for " +
                          std::to_string(a.n_rows) + " rows");
  }
  const std::size_t n = static_cast<std::size_t>(a.n_rows);
  BicgstabResult<T> result;
  result.preprocess_seconds = backend.preprocess_seconds();
  result.x.assign(n, T(0));

  const double b_norm = detail::norm2(b);
  if (b_norm == 0.0) {
    result.status = SolveStatus::converged;
    result.final_residual = 0.0;
    return result;
  }

  auto breakdown = [&](const char* reason, index_t iter) {
    result.status = SolveStatus::breakdown;
    result.breakdown_reason = reason;
    result.iterations = iter;
  };

  // State of the recurrence; v and t are copies of backend outputs because
  // three multiplies per iteration overrun the backend's two live buffers.
  std::vector<T> r(b.begin(), b.end());   // r0 = b - A*0
  std::vector<T> r_hat = r;
  std::vector<T> p(n, T(0)), v(n, T(0)), s(n, T(0)), t(n, T(0));
  T rho = T(1), alpha = T(1), omega = T(1);

  const auto t0 = std::chrono::steady_clock::now();
  for (index_t iter = 1; iter <= cfg.max_iters; ++iter) {
    // (1) rho_k = <r_hat, r_{k-1}>
    const T rho_new = detail::dot(r_hat, r);
    if (rho_new == T(0) || !std::isfinite(static_cast<double>(rho_new))) {
      breakdown("rho", iter);
      break;
    }
    if (iter == 1) {
      p = r;
    } else {
      // (2) beta = (rho_k / rho_{k-1}) * (alpha / omega)
      const T beta = (rho_new / rho) * (alpha / omega);
      // (3) p = r + beta * (p - omega * v)
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = r[i] + beta * (p[i] - omega * v[i]);
      }
    }
    // (4) v = A * p
    v = backend.apply(std::span<const T>(p));
    const T rhat_v = detail::dot(r_hat, v);
    if (rhat_v == T(0) || !std::isfinite(static_cast<double>(rhat_v))) {
      breakdown("rhat_dot_v", iter);
      break;
    }
    // (5) alpha = rho_k / <r_hat, v>
    alpha = rho_new / rhat_v;
    // (6) s = r - alpha * v
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    // (7) t = A * s
    t = backend.apply(std::span<const T>(s));
    const T t_t = detail::dot(t, t);
    if (t_t == T(0) || !std::isfinite(static_cast<double>(t_t))) {
      breakdown("t_dot_t", iter);
      break;
    }
    // (8) omega = <t, s> / <t, t>
    omega = detail::dot(t, s) / t_t;
    if (omega == T(0) || !std::isfinite(static_cast<double>(omega))) {
      breakdown("omega", iter);
      break;
    }
    // (9) x += alpha * p + omega * s;  (10) r = s - omega * t
    for (std::size_t i = 0; i < n; ++i) {
      result.x[i] += alpha * p[i] + omega * s[i];
      r[i] = s[i] - omega * t[i];
    }
    rho = rho_new;

    // Stopping test on the true residual ||A*x - b|| / ||b||.
    const std::vector<T>& ax = backend.apply(std::span<const T>(result.x));
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(ax[i]) - static_cast<double>(b[i]);
      rr += d * d;
    }
    const double resid = std::sqrt(rr) / b_norm;
    result.residual_history.push_back(resid);
    result.iterations = iter;
    result.final_residual = resid;
    if (!std::isfinite(resid)) {
      breakdown("diverged", iter);
      break;
    }
    if (resid < static_cast<double>(cfg.tol)) {
      result.status = SolveStatus::converged;
      break;
    }
  }
  result.iterate_seconds = detail::seconds_since(t0);
  return result;
}

}  // namespace merbit
