#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "merbit/types.hpp"

namespace merbit {

// One benchmark measurement row.  `nnz` and `baseline_seconds` travel with
// the row so that the derived columns can be recomputed from the row alone:
//
//   ct      == 2 * nnz / mean_seconds
//   speedup == baseline_seconds / mean_seconds
//
// must hold bitwise after any emit/parse round trip.
struct BenchRecord {
  std::string dataset;
  std::string kernel;
  std::string precision;     // "f32" | "f64"
  index_t omega = 0;         // 0 for kernels without a SIMT config
  index_t sigma = 0;
  index_t block_size = 0;
  index_t iterations = 0;
  index_t nnz = 0;
  double mean_seconds = 0.0;      // mean SpMV duration T over `iterations`
  double baseline_seconds = 0.0;  // COO mean duration in the same process
  double ct = 0.0;                // 2 * nnz / T, FLOP/s
  double speedup = 0.0;           // baseline_seconds / T
  double preprocess_seconds = 0.0;   // T_p (tile build; 0 for baselines)
  double long_row_fraction = 0.0;    // r_f
  double metadata_bytes = 0.0;       // footprint model at this sigma
  std::string degree_group;          // "G-L" | "G-H"

  bool operator==(const BenchRecord&) const = default;
};

inline constexpr int kBenchSchemaVersion = 1;

namespace detail {

// Shortest text that parses back to the identical double (subnormals
// included, which stream precision tricks do not guarantee).
inline std::string exact_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw parse_error("unprintable duration");
  return std::string(buf, end);
}

inline void check_csv_safe(const std::string& field) {
  if (field.find_first_of(",\"\r\n") != std::string::npos) {
    throw parse_error("CSV field contains a delimiter: \"" + field + "\"");
  }
}

}  // namespace detail

inline std::string bench_csv_header() {
  return "schema,dataset,kernel,precision,omega,sigma,block_size,iterations,"
         "nnz,mean_seconds,baseline_seconds,ct,speedup,preprocess_seconds,"
         "long_row_fraction,metadata_bytes,degree_group";
}

inline std::string emit_csv(const BenchRecord& r) {
  for (const std::string* f : {&r.dataset, &r.kernel, &r.precision,
                               &r.degree_group}) {
    detail::check_csv_safe(*f);
  }
  std::ostringstream out;
  out << kBenchSchemaVersion << ',' << r.dataset << ',' << r.kernel << ','
      << r.precision << ',' << r.omega << ',' << r.sigma << ','
      << r.block_size << ',' << r.iterations << ',' << r.nnz << ','
      << detail::exact_double(r.mean_seconds) << ','
      << detail::exact_double(r.baseline_seconds) << ','
      << detail::exact_double(r.ct) << ',' << detail::exact_double(r.speedup)
      << ',' << detail::exact_double(r.preprocess_seconds) << ','
      << detail::exact_double(r.long_row_fraction) << ','
      << detail::exact_double(r.metadata_bytes) << ',' << r.degree_group;
  return out.str();
}

inline BenchRecord parse_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  if (fields.size() != 17) {
    throw parse_error("benchmark row has " + std::to_string(fields.size()) +
                      " fields, expected 17: \"" + line + "\"");
  }
  std::size_t i = 0;
  const auto next = [&]() -> const std::string& { return fields[i++]; };
  const auto as_index = [](const std::string& s) {
    index_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw parse_error("bad integer field: \"" + s + "\"");
    }
    return v;
  };
  const auto as_double = [](const std::string& s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw parse_error("bad number field: \"" + s + "\"");
    }
    return v;
  };
  if (as_index(next()) != kBenchSchemaVersion) {
    throw parse_error("unsupported benchmark schema in: \"" + line + "\"");
  }
  BenchRecord r;
  r.dataset = next();
  r.kernel = next();
  r.precision = next();
  r.omega = as_index(next());
  r.sigma = as_index(next());
  r.block_size = as_index(next());
  r.iterations = as_index(next());
  r.nnz = as_index(next());
  r.mean_seconds = as_double(next());
  r.baseline_seconds = as_double(next());
  r.ct = as_double(next());
  r.speedup = as_double(next());
  r.preprocess_seconds = as_double(next());
  r.long_row_fraction = as_double(next());
  r.metadata_bytes = as_double(next());
  r.degree_group = next();
  return r;
}

inline void to_json(nlohmann::json& j, const BenchRecord& r) {
  j = nlohmann::json{{"schema", kBenchSchemaVersion},
                     {"dataset", r.dataset},
                     {"kernel", r.kernel},
                     {"precision", r.precision},
                     {"omega", r.omega},
                     {"sigma", r.sigma},
                     {"block_size", r.block_size},
                     {"iterations", r.iterations},
                     {"nnz", r.nnz},
                     {"mean_seconds", r.mean_seconds},
                     {"baseline_seconds", r.baseline_seconds},
                     {"ct", r.ct},
                     {"speedup", r.speedup},
                     {"preprocess_seconds", r.preprocess_seconds},
                     {"long_row_fraction", r.long_row_fraction},
                     {"metadata_bytes", r.metadata_bytes},
                     {"degree_group", r.degree_group}};
}

inline void from_json(const nlohmann::json& j, BenchRecord& r) {
  if (j.at("schema").get<int>() != kBenchSchemaVersion) {
    throw parse_error("unsupported benchmark schema in JSON row");
  }
  j.at("dataset").get_to(r.dataset);
  j.at("kernel").get_to(r.kernel);
  j.at("precision").get_to(r.precision);
  j.at("omega").get_to(r.omega);
  j.at("sigma").get_to(r.sigma);
  j.at("block_size").get_to(r.block_size);
  j.at("iterations").get_to(r.iterations);
  j.at("nnz").get_to(r.nnz);
  j.at("mean_seconds").get_to(r.mean_seconds);
  j.at("baseline_seconds").get_to(r.baseline_seconds);
  j.at("ct").get_to(r.ct);
  j.at("speedup").get_to(r.speedup);
  j.at("preprocess_seconds").get_to(r.preprocess_seconds);
  j.at("long_row_fraction").get_to(r.long_row_fraction);
  j.at("metadata_bytes").get_to(r.metadata_bytes);
  j.at("degree_group").get_to(r.degree_group);
}

}  // namespace merbit
