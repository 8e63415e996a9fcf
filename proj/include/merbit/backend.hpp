#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "merbit/csr.hpp"
#include "merbit/dual_buffer.hpp"
#include "merbit/merbit_spmv.hpp"
#include "merbit/merge_spmv.hpp"
#include "merbit/reference.hpp"

namespace merbit {

// A multiply engine bound to one matrix.  apply() returns a reference to an
// internal output buffer that stays valid only until the next apply() — the
// engines ping-pong two outputs, and the descriptor engine additionally
// re-zeroes the companion during the call.  Callers that need two live
// results at once must copy.
template <typename T>
class SpmvBackend {
 public:
  virtual ~SpmvBackend() = default;
  virtual const std::vector<T>& apply(std::span<const T> x) = 0;
  virtual std::string name() const = 0;

  // Wall time spent building multiply metadata at construction (T_p).
  double preprocess_seconds() const { return preprocess_seconds_; }

 protected:
  double preprocess_seconds_ = 0.0;
};

namespace detail {

inline double seconds_since(
    std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace detail

template <typename T>
class CsrReferenceBackend final : public SpmvBackend<T> {
 public:
  explicit CsrReferenceBackend(const CsrMatrix<T>& a)
      : a_(a),
        out_{std::vector<T>(static_cast<std::size_t>(a.n_rows)),
             std::vector<T>(static_cast<std::size_t>(a.n_rows))} {}

  const std::vector<T>& apply(std::span<const T> x) override {
    parity_ ^= 1;
    spmv_csr_reference(a_, x, std::span<T>(out_[parity_]));
    return out_[parity_];
  }
  std::string name() const override { return "csr"; }

 private:
  const CsrMatrix<T>& a_;
  std::vector<T> out_[2];
  int parity_ = 1;
};

template <typename T>
class CooReferenceBackend final : public SpmvBackend<T> {
 public:
  explicit CooReferenceBackend(const CooTriples& normalized)
      : coo_(normalized) {}

  const std::vector<T>& apply(std::span<const T> x) override {
    parity_ ^= 1;
    out_[parity_] = spmv_coo_reference<T>(coo_, x);
    return out_[parity_];
  }
  std::string name() const override { return "coo"; }

 private:
  const CooTriples& coo_;
  std::vector<T> out_[2];
  int parity_ = 1;
};

template <typename T>
class MergeRuntimeBackend final : public SpmvBackend<T> {
 public:
  MergeRuntimeBackend(const CsrMatrix<T>& a, const SimtConfig& c,
                      ThreadPool* pool)
      : a_(a),
        config_(c),
        pool_(pool),
        out_{std::vector<T>(static_cast<std::size_t>(a.n_rows)),
             std::vector<T>(static_cast<std::size_t>(a.n_rows))} {}

  const std::vector<T>& apply(std::span<const T> x) override {
    parity_ ^= 1;
    spmv_merge_runtime(a_, x, std::span<T>(out_[parity_]), config_, pool_);
    return out_[parity_];
  }
  std::string name() const override { return "merge"; }

 private:
  const CsrMatrix<T>& a_;
  SimtConfig config_;
  ThreadPool* pool_;
  std::vector<T> out_[2];
  int parity_ = 1;
};

template <typename T>
class MerbitBackend final : public SpmvBackend<T> {
 public:
  MerbitBackend(const CsrMatrix<T>& a, const SimtConfig& c, ThreadPool* pool)
      : a_(a), config_(c), pool_(pool), buffer_(a.n_rows) {
    const auto t0 = std::chrono::steady_clock::now();
    tile_ = generate_tile(a, c);
    this->preprocess_seconds_ = detail::seconds_since(t0);
  }

  const std::vector<T>& apply(std::span<const T> x) override {
    spmv_merbit(a_, tile_, config_, x, buffer_, pool_);
    return buffer_.last_output();
  }
  std::string name() const override { return "merbit"; }

  const TileMetadata& tile() const { return tile_; }

 private:
  const CsrMatrix<T>& a_;
  SimtConfig config_;
  ThreadPool* pool_;
  TileMetadata tile_;
  DualBuffer<T> buffer_;
};

enum class BackendKind { coo, csr, merge, merbit };

inline const char* backend_kind_name(BackendKind k) {
  switch (k) {
    case BackendKind::coo: return "coo";
    case BackendKind::csr: return "csr";
    case BackendKind::merge: return "merge";
    case BackendKind::merbit: return "merbit";
  }
  return "?";
}

// `coo` requires `normalized` to outlive the backend; the others require
// `a` to outlive it.
template <typename T>
std::unique_ptr<SpmvBackend<T>> make_backend(BackendKind kind,
                                             const CsrMatrix<T>& a,
                                             const CooTriples& normalized,
                                             const SimtConfig& c,
                                             ThreadPool* pool) {
  switch (kind) {
    case BackendKind::coo:
      return std::make_unique<CooReferenceBackend<T>>(normalized);
    case BackendKind::csr:
      return std::make_unique<CsrReferenceBackend<T>>(a);
    case BackendKind::merge:
      return std::make_unique<MergeRuntimeBackend<T>>(a, c, pool);
    case BackendKind::merbit:
      return std::make_unique<MerbitBackend<T>>(a, c, pool);
  }
  throw config_error("unknown backend kind");
}

}  // namespace merbit
