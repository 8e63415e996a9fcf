#include "merbit/matrix_market.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

static_assert(std::endian::native == std::endian::little,
              "cache formats are defined little-endian and written raw");

namespace merbit {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& what) {
  throw parse_error(origin + ":" + std::to_string(line) + ": " + what);
}

// Reads the next non-comment, non-blank line; returns false at EOF.
bool next_payload_line(std::istream& in, std::string& line,
                       std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto pos = line.find_first_not_of(" \t");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

CooTriples parse_matrix_market(std::istream& in, const std::string& origin) {
  std::string banner;
  std::size_t line_no = 0;
  if (!std::getline(in, banner)) {
    throw parse_error(origin + ": empty file");
  }
  ++line_no;
  if (!banner.empty() && banner.back() == '\r') banner.pop_back();

  std::istringstream hs(banner);
  std::string magic, object, format, field, symmetry;
  hs >> magic >> object >> format >> field >> symmetry;
  if (magic != "%%MatrixMarket") {
    fail(origin, line_no, "missing %%MatrixMarket banner");
  }
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") {
    fail(origin, line_no, "unsupported object '" + object + "'");
  }
  if (format != "coordinate") {
    fail(origin, line_no, "unsupported format '" + format +
                              "' (only coordinate is supported)");
  }
  const bool pattern = field == "pattern";
  if (field != "real" && field != "integer" && !pattern) {
    fail(origin, line_no, "unsupported field '" + field + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  if (symmetry != "general" && !symmetric) {
    fail(origin, line_no, "unsupported symmetry '" + symmetry + "'");
  }

  std::string line;
  if (!next_payload_line(in, line, line_no)) {
    fail(origin, line_no, "missing size line");
  }
  CooTriples coo;
  std::int64_t declared_nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> coo.n_rows >> coo.n_cols >> declared_nnz)) {
      fail(origin, line_no, "malformed size line '" + line + "'");
    }
    std::string extra;
    if (ss >> extra) fail(origin, line_no, "trailing tokens on size line");
    if (coo.n_rows < 0 || coo.n_cols < 0 || declared_nnz < 0) {
      fail(origin, line_no, "negative dimension in size line");
    }
  }

  coo.entries.reserve(static_cast<std::size_t>(declared_nnz) *
                      (symmetric ? 2 : 1));
  for (std::int64_t k = 0; k < declared_nnz; ++k) {
    if (!next_payload_line(in, line, line_no)) {
      fail(origin, line_no,
           "expected " + std::to_string(declared_nnz) + " entries, got " +
               std::to_string(k));
    }
    std::istringstream ss(line);
    index_t r = 0, c = 0;
    double v = 1.0;
    if (!(ss >> r >> c)) fail(origin, line_no, "malformed entry '" + line + "'");
    if (!pattern && !(ss >> v)) {
      fail(origin, line_no, "missing value in entry '" + line + "'");
    }
    std::string extra;
    if (ss >> extra) fail(origin, line_no, "trailing tokens in entry");
    if (r < 1 || r > coo.n_rows || c < 1 || c > coo.n_cols) {
      fail(origin, line_no, "entry (" + std::to_string(r) + ", " +
                                std::to_string(c) + ") outside " +
                                std::to_string(coo.n_rows) + "x" +
                                std::to_string(coo.n_cols));
    }
    coo.entries.push_back({r - 1, c - 1, v});
    if (symmetric && r != c) {
      coo.entries.push_back({c - 1, r - 1, v});
    }
  }
  if (next_payload_line(in, line, line_no)) {
    fail(origin, line_no, "trailing entries beyond declared count");
  }
  return coo;
}

CooTriples parse_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return parse_matrix_market(in, path);
}

namespace {

constexpr char kMatrixMagic[4] = {'M', 'B', 'M', 'X'};
constexpr std::uint32_t kMatrixVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw corruption_error("short read in cache '" + path + "'");
  }
  return v;
}

}  // namespace

void write_matrix_market(std::ostream& out, const CooTriples& coo) {
  out << "%%MatrixMarket matrix coordinate real general\n"
      << coo.n_rows << ' ' << coo.n_cols << ' ' << coo.entries.size() << '\n';
  char buf[64];
  for (const CooEntry& e : coo.entries) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
    if (ec != std::errc{}) throw io_error("unprintable matrix value");
    out << (e.row + 1) << ' ' << (e.col + 1) << ' '
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
}

void write_matrix_market_file(const std::string& path, const CooTriples& coo) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write '" + path + "'");
  write_matrix_market(out, coo);
  if (!out) throw io_error("write failed for '" + path + "'");
}

void write_matrix_cache(const std::string& path, const CooTriples& coo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path + "'");
  out.write(kMatrixMagic, sizeof(kMatrixMagic));
  put(out, kMatrixVersion);
  put(out, static_cast<std::int64_t>(coo.n_rows));
  put(out, static_cast<std::int64_t>(coo.n_cols));
  put(out, static_cast<std::int64_t>(coo.entries.size()));
  for (const CooEntry& e : coo.entries) {
    put(out, e.row);
    put(out, e.col);
    put(out, e.value);
  }
  if (!out) throw io_error("write failed for '" + path + "'");
}

CooTriples read_matrix_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMatrixMagic, 4) != 0) {
    throw parse_error("'" + path + "' is not a matrix cache");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kMatrixVersion) {
    throw parse_error("unsupported matrix cache version " +
                      std::to_string(version));
  }
  CooTriples coo;
  coo.n_rows = get<std::int64_t>(in, path);
  coo.n_cols = get<std::int64_t>(in, path);
  const auto nnz = get<std::int64_t>(in, path);
  if (coo.n_rows < 0 || coo.n_cols < 0 || nnz < 0) {
    throw corruption_error("negative dimension in cache '" + path + "'");
  }
  coo.entries.reserve(static_cast<std::size_t>(nnz));
  for (std::int64_t k = 0; k < nnz; ++k) {
    CooEntry e;
    e.row = get<std::int64_t>(in, path);
    e.col = get<std::int64_t>(in, path);
    e.value = get<double>(in, path);
    if (e.row < 0 || e.row >= coo.n_rows || e.col < 0 || e.col >= coo.n_cols) {
      throw corruption_error("entry outside matrix bounds in cache '" + path +
                             "'");
    }
    coo.entries.push_back(e);
  }
  return coo;
}

CooTriples load_matrix_any(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw io_error("cannot open '" + path + "'");
  char head[4] = {0, 0, 0, 0};
  probe.read(head, 4);
  probe.close();
  if (std::memcmp(head, kMatrixMagic, 4) == 0) {
    return read_matrix_cache(path);
  }
  return parse_matrix_market_file(path);
}

}  // namespace merbit
