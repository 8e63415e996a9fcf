#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace merbit {

// Signed 64-bit indices throughout: row/column ids, nonzero counts, and
// merge-path diagonals (which range over [0, m+n]) all fit without overflow
// gymnastics.  The packed descriptor layer narrows to 32-bit words and
// enforces its own capacity limits at that boundary.
using index_t = std::int64_t;

enum class ScalarPrecision { f32, f64 };

inline const char* precision_name(ScalarPrecision p) {
  return p == ScalarPrecision::f32 ? "f32" : "f64";
}

// Error taxonomy.  The CLI maps these onto distinct exit codes, so keep the
// categories coarse and stable.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing / unreadable / short read.
class io_error : public error {
 public:
  using error::error;
};

// Malformed input text or binary payload (Matrix Market, caches).
class parse_error : public error {
 public:
  using error::error;
};

// Infeasible or inconsistent SIMT configuration (omega/sigma/block size).
class config_error : public error {
 public:
  using error::error;
};

// Operand shape mismatches (vector length vs. matrix columns, non-square
// input where square is required, ...).
class dimension_error : public error {
 public:
  using error::error;
};

// Input exceeds a representational limit (row count vs. the long-row mark
// bit, descriptor field overflow, 32-bit tile cursor overflow).
class capacity_error : public error {
 public:
  using error::error;
};

// Stored metadata fails self-validation (tile cache decode, path
// reconstruction that does not land on (m, n)).
class corruption_error : public error {
 public:
  using error::error;
};

}  // namespace merbit
