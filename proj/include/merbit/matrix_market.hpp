#pragma once

#include <iosfwd>
#include <string>

#include "merbit/csr.hpp"

namespace merbit {

// Parses Matrix Market "coordinate" files: real / integer / pattern entries,
// general or symmetric layout.  Symmetric off-diagonal entries are mirrored;
// pattern entries read as 1.0.  Complex fields, array (dense) files, and
// hermitian/skew-symmetric layouts raise parse_error("unsupported ...").
CooTriples parse_matrix_market(std::istream& in, const std::string& origin);
CooTriples parse_matrix_market_file(const std::string& path);

// Writes "coordinate real general" text with 1-based indices.
void write_matrix_market(std::ostream& out, const CooTriples& coo);
void write_matrix_market_file(const std::string& path, const CooTriples& coo);

// Versioned little-endian binary matrix cache (values stored as f64).
void write_matrix_cache(const std::string& path, const CooTriples& coo);
CooTriples read_matrix_cache(const std::string& path);

// Loads either format, sniffing the leading magic bytes.
CooTriples load_matrix_any(const std::string& path);

}  // namespace merbit
