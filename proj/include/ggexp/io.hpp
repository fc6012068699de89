#pragma once

// JSON and CSV serialization with 17 significant digits, payload hashing and
// atomic file output.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ggexp/expansion.hpp"
#include "ggexp/inequalities.hpp"
#include "ggexp/quadrature.hpp"

namespace ggexp {

using Json = nlohmann::json;

/// Version stored in the top-level `schema` field of every report.
inline constexpr int kSchemaVersion = 1;

/// "%.17g"; non-finite values print as nan, inf or -inf.
std::string format_number(double x);

/// Deterministic JSON text: sorted keys, two-space indent, floats with 17
/// significant digits, non-finite floats as null. Ends with a newline.
std::string dump_json(const Json& value);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

Json to_json(const BasisParams& bp);
Json to_json(const CoefficientVector& cv);
Json to_json(const GenGegenbauerRule& rule);
Json to_json(const InequalityReport& report);

/// Inverse of to_json(CoefficientVector); throws ArgumentError on malformed input.
CoefficientVector coefficient_vector_from_json(const Json& j);

/// `node,weight` rows.
std::string rule_csv(const GenGegenbauerRule& rule);
/// `n,coefficient` rows.
std::string coefficients_csv(const CoefficientVector& cv);
/// `seed,lhs,rhs,ratio` rows.
std::string trials_csv(const std::vector<Trial>& trials);
/// `x,ratio` rows.
std::string plot_csv(const std::vector<std::pair<double, double>>& points);

/// {schema, payload, payload_hash, meta: {timestamp}}. The hash covers
/// dump_json(payload) only, so reruns differ in `meta` alone.
Json report_envelope(const Json& payload, const std::string& timestamp);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Writes to a temporary file in the same directory, then renames it over
/// `path`. Throws ArgumentError when the file cannot be written.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace ggexp
