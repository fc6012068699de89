#include "ggexp/io.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

#include "ggexp/errors.hpp"

namespace ggexp {

namespace {

void dump_into(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(it.key()).dump() + ": ";
      dump_into(it.value(), indent + 2, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k > 0) out += ",\n";
      out += pad;
      dump_into(j[k], indent + 2, out);
    }
    out += "\n" + close + "]";
  } else if (j.is_number_float()) {
    const double x = j.get<double>();
    out += std::isfinite(x) ? format_number(x) : "null";
  } else {
    out += j.dump();
  }
}

std::string csv(const char* header, std::size_t rows, const std::function<std::string(std::size_t)>& row) {
  std::string out = std::string(header) + "\n";
  for (std::size_t k = 0; k < rows; ++k) out += row(k) + "\n";
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, 0, out);
  out += "\n";
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const BasisParams& bp) { return {{"lambda", bp.lambda()}, {"mu", bp.mu()}}; }

Json to_json(const CoefficientVector& cv) {
  return {{"lambda", cv.params.lambda()}, {"mu", cv.params.mu()}, {"coeffs", cv.coeffs}};
}

Json to_json(const GenGegenbauerRule& rule) {
  return {{"lambda", rule.params.lambda()},
          {"mu", rule.params.mu()},
          {"nodes", rule.nodes},
          {"weights", rule.weights},
          {"exactness_degree", rule.exactness_degree}};
}

Json to_json(const InequalityReport& report) {
  Json exponents = Json::object();
  const bool forward = report.direction == Direction::kForward;
  exponents[forward ? "p" : "q"] = report.exponents.primary;
  if (report.exponents.secondary) exponents[forward ? "s" : "r"] = *report.exponents.secondary;
  Json trials = Json::array();
  for (const Trial& t : report.trials) {
    trials.push_back({{"seed", t.seed}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"ratio", t.ratio}});
  }
  return {{"theorem_id", std::string(to_string(report.theorem_id))},
          {"direction", std::string(to_string(report.direction))},
          {"params", to_json(report.params)},
          {"exponents", exponents},
          {"trials", trials},
          {"empirical_constant", report.empirical_constant},
          {"pass", report.pass}};
}

CoefficientVector coefficient_vector_from_json(const Json& j) {
  try {
    return CoefficientVector(BasisParams(j.at("lambda").get<double>(), j.at("mu").get<double>()),
                             j.at("coeffs").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("malformed coefficient vector: ") + e.what());
  }
}

std::string rule_csv(const GenGegenbauerRule& rule) {
  return csv("node,weight", rule.size(),
             [&](std::size_t k) { return format_number(rule.nodes[k]) + "," + format_number(rule.weights[k]); });
}

std::string coefficients_csv(const CoefficientVector& cv) {
  return csv("n,coefficient", cv.size(),
             [&](std::size_t k) { return std::to_string(k) + "," + format_number(cv.coeffs[k]); });
}

std::string trials_csv(const std::vector<Trial>& trials) {
  return csv("seed,lhs,rhs,ratio", trials.size(), [&](std::size_t k) {
    const Trial& t = trials[k];
    return std::to_string(t.seed) + "," + format_number(t.lhs) + "," + format_number(t.rhs) + "," +
           format_number(t.ratio);
  });
}

std::string plot_csv(const std::vector<std::pair<double, double>>& points) {
  return csv("x,ratio", points.size(),
             [&](std::size_t k) { return format_number(points[k].first) + "," + format_number(points[k].second); });
}

Json report_envelope(const Json& payload, const std::string& timestamp) {
  return {{"schema", kSchemaVersion},
          {"payload", payload},
          {"payload_hash", "fnv1a64:" + fnv1a_hex(dump_json(payload))},
          {"meta", {{"timestamp", timestamp}}}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write output file '" + path + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw ArgumentError("failed while writing output file '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ArgumentError("cannot replace output file '" + path + "'");
  }
}

}  // namespace ggexp
