#pragma once

#include <vector>

#include "merbit/types.hpp"

namespace merbit {

// Ping-pong output pair for iterative multiplies.  One buffer is the active
// output target (all zeros before the multiply); the companion holds the
// previous result and is re-zeroed region-by-region while the multiply
// commits, so no iteration ever pays a full-vector reset.  After flip():
// last_output() is the result just produced and active() is a fully zeroed
// target for the next multiply.
//
// The pair holds outputs only — callers must not feed active() or
// last_output() back in as the multiply input, because the companion is
// wiped mid-call.
template <typename T>
class DualBuffer {
 public:
  explicit DualBuffer(index_t n)
      : bufs_{std::vector<T>(static_cast<std::size_t>(n), T(0)),
              std::vector<T>(static_cast<std::size_t>(n), T(0))} {}

  index_t size() const { return static_cast<index_t>(bufs_[0].size()); }
  int parity() const { return parity_; }

  std::vector<T>& active() { return bufs_[parity_]; }
  const std::vector<T>& active() const { return bufs_[parity_]; }
  std::vector<T>& inactive() { return bufs_[parity_ ^ 1]; }
  const std::vector<T>& inactive() const { return bufs_[parity_ ^ 1]; }

  // Most recent completed output (valid only after a multiply has flipped).
  const std::vector<T>& last_output() const { return bufs_[parity_ ^ 1]; }

  void flip() { parity_ ^= 1; }

 private:
  std::vector<T> bufs_[2];
  int parity_ = 0;
};

}  // namespace merbit
