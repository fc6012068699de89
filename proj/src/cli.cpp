#include "ggexp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ggexp/errors.hpp"
#include "ggexp/expansion.hpp"
#include "ggexp/quadrature.hpp"
#include "ggexp/special_poly.hpp"
#include "ggexp/verify.hpp"

namespace ggexp {

namespace {

constexpr const char* kHelpFooter =
    "Output files:\n"
    "  quad CSV          node,weight\n"
    "  transform CSV     n,coefficient\n"
    "  verify plot CSV   x,ratio\n"
    "  verify trials CSV seed,lhs,rhs,ratio\n"
    "JSON reports carry schema 1, the payload, an FNV-1a hash of the payload and a\n"
    "separate meta.timestamp. Numbers use 17 significant digits.\n"
    "Exit status: 0 pass, 1 verification failed, 2 usage or domain error, 3 numerical failure.\n"
    "GGEXP_THREADS caps worker threads (0 = one per core).\n"
    "Transform input file: a 'basis,monomial' or 'basis,orthonormal' line, an optional\n"
    "'n,coefficient' header, then 'n,value' rows; omitted indices are zero.";

constexpr int kOrthonormalityNmax = 50;
constexpr int kSupnormNmin = 16;
constexpr int kSupnormNmax = 256;
constexpr int kParsevalDegree = 40;
constexpr int kForwardDegreeCap = 128;
constexpr int kConverseLength = 32;
constexpr int kConnectionNmax = 20;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

TheoremId parse_theorem(const std::string& name) {
  const std::string s = lower(name);
  if (s == "hl" || s == "hardy-littlewood") return TheoremId::kHardyLittlewood;
  if (s == "hy" || s == "hausdorff-young") return TheoremId::kHausdorffYoung;
  if (s == "unified") return TheoremId::kUnified;
  throw ArgumentError("unknown theorem '" + name + "' (expected HL, HY or UNIFIED)");
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

double horner(const std::vector<double>& a, double t) {
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ArgumentError("bad number '" + s + "' in " + where);
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

struct PolynomialInput {
  bool monomial = false;
  std::vector<double> coeffs;
};

PolynomialInput read_polynomial_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read input file '" + path + "'");
  PolynomialInput result;
  bool have_basis = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected two fields");
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    if (!have_basis) {
      if (a != "basis" || (b != "monomial" && b != "orthonormal")) {
        throw ArgumentError(path + ": first line must be 'basis,monomial' or 'basis,orthonormal'");
      }
      result.monomial = b == "monomial";
      have_basis = true;
      continue;
    }
    if (a == "n" && b == "coefficient") continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const double idx = parse_double(a, where);
    if (idx < 0 || idx != static_cast<int>(idx)) throw ArgumentError(where + ": index must be a non-negative integer");
    const auto k = static_cast<std::size_t>(idx);
    if (k >= result.coeffs.size()) result.coeffs.resize(k + 1, 0.0);
    result.coeffs[k] = parse_double(b, where);
  }
  if (!have_basis) throw ArgumentError(path + ": missing basis line");
  if (result.coeffs.empty()) result.coeffs.push_back(0.0);
  return result;
}

std::string derived_plot_path(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + ".csv";
  }
  return out + ".csv";
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::string envelope_text(const RunConfig& config, Json body) {
  body["config"] = to_json(config);
  return dump_json(report_envelope(body, utc_timestamp()));
}

int run_eval(const RunConfig& c, std::ostream& out) {
  const BasisParams bp(c.lambda, c.mu);
  const double v = c.orthonormal ? orthonormal_gg_eval(bp, c.n, c.t) : gen_gegenbauer_eval(bp, c.n, c.t);
  const OutputFormat fmt = c.format.value_or(OutputFormat::kText);
  if (fmt == OutputFormat::kJson) {
    emit(c.out, envelope_text(c, {{"value", v}}), out);
  } else {
    emit(c.out, format_number(v) + "\n", out);
  }
  return kExitPass;
}

int run_quad(const RunConfig& c, std::ostream& out) {
  const BasisParams bp(c.lambda, c.mu);
  const auto rule = gen_gegenbauer_rule(bp, c.points);
  if (c.format.value_or(OutputFormat::kCsv) == OutputFormat::kJson) {
    emit(c.out, envelope_text(c, {{"rule", to_json(*rule)}}), out);
  } else {
    emit(c.out, rule_csv(*rule), out);
  }
  return kExitPass;
}

int run_transform(const RunConfig& c, std::ostream& out) {
  const BasisParams bp(c.lambda, c.mu);
  if (c.degree < 0) throw ArgumentError("--degree must be non-negative");
  CoefficientVector cv(bp, {});
  const std::string family_prefix = "family:";
  if (c.input.compare(0, family_prefix.size(), family_prefix) == 0) {
    const Family fam = parse_family(c.input.substr(family_prefix.size()));
    const auto drawn = draw_coefficients(fam, bp, c.degree, c.seed);
    cv = forward_transform(bp, TestFunction::polynomial(drawn), c.degree);
  } else {
    const PolynomialInput poly = read_polynomial_file(c.input);
    const int bound = static_cast<int>(poly.coeffs.size()) - 1;
    if (poly.monomial) {
      cv = forward_transform(bp, TestFunction::callable([&](double t) { return horner(poly.coeffs, t); }, bound),
                             c.degree);
    } else {
      cv = forward_transform(bp, TestFunction::polynomial(CoefficientVector(bp, poly.coeffs)), c.degree);
    }
  }
  if (c.format.value_or(OutputFormat::kCsv) == OutputFormat::kJson) {
    emit(c.out, envelope_text(c, {{"coefficients", to_json(cv)}}), out);
  } else {
    emit(c.out, coefficients_csv(cv), out);
  }
  return kExitPass;
}

VerificationReport dispatch_verify(const RunConfig& c) {
  const BasisParams bp(c.lambda, c.mu);
  ScanOptions scan;
  scan.family = parse_family(c.family);
  scan.trials = c.trials;
  scan.seed = c.seed;
  scan.lp.rel_tol = c.rel_tol;
  const std::string& k = c.check;
  if (k == "orthonormality") return verify_orthonormality(bp, c.nmax.value_or(kOrthonormalityNmax));
  if (k == "supnorm") return verify_supnorm(bp, c.nmin.value_or(kSupnormNmin), c.nmax.value_or(kSupnormNmax));
  if (k == "parseval") return verify_parseval(bp, c.nmax.value_or(kParsevalDegree), c.trials, c.seed);
  if (k == "connection") return verify_connection(bp, c.nmax.value_or(kConnectionNmax));
  if (k == "converse") {
    const TheoremId id = parse_theorem(c.theorem);
    Exponents e{c.q.value_or(3.0), c.r};
    if (id == TheoremId::kUnified && !e.secondary) {
      const double q = e.primary;
      e.secondary = q > 1.0 && std::isfinite(q) ? 0.5 * (q + conjugate_exponent(q)) : q;
    }
    scan.degree_cap = c.nmax.value_or(kConverseLength);
    return verify_converse(id, bp, e, scan);
  }
  TheoremId id = TheoremId::kHardyLittlewood;
  if (k == "hausdorff-young") {
    id = TheoremId::kHausdorffYoung;
  } else if (k == "unified") {
    id = TheoremId::kUnified;
  } else if (k != "hardy-littlewood") {
    throw ArgumentError("unknown verify check '" + k + "'");
  }
  Exponents e{c.p.value_or(1.5), c.s};
  if (id == TheoremId::kUnified && !e.secondary) {
    const double p = e.primary;
    e.secondary = p > 1.0 && std::isfinite(p) ? 0.5 * (p + conjugate_exponent(p)) : p;
  }
  scan.degree_cap = c.nmax.value_or(kForwardDegreeCap);
  return verify_forward(id, bp, e, scan);
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const VerificationReport report = dispatch_verify(c);
  if (c.format.value_or(OutputFormat::kJson) == OutputFormat::kCsv) {
    emit(c.out, plot_csv(report.series), out);
  } else {
    emit(c.out, envelope_text(c, {{"report", to_json(report)}}), out);
    const std::string plot = !c.plot.empty() ? c.plot : c.out.empty() ? "" : derived_plot_path(c.out);
    if (!plot.empty()) write_file_atomic(plot, plot_csv(report.series));
  }
  if (!c.trials_csv.empty()) {
    std::vector<Trial> rows;
    if (!report.reports.empty()) rows = report.reports.front().trials;
    write_file_atomic(c.trials_csv, trials_csv(rows));
  }
  err << report.check << ": " << (report.pass ? "PASS" : "FAIL");
  for (const auto& [name, value] : report.metrics) err << " " << name << "=" << format_number(value);
  err << "\n";
  return report.pass ? kExitPass : kExitVerificationFailed;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kEval: return "eval";
    case Command::kQuad: return "quad";
    case Command::kTransform: return "transform";
    case Command::kVerify: return "verify";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::kText: return "text";
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
  }
  return "unknown";
}

Json to_json(const RunConfig& c) {
  Json j = {{"command", std::string(to_string(c.command))}, {"lambda", c.lambda}, {"mu", c.mu}, {"seed", c.seed},
            {"out", c.out}};
  j["format"] = c.format ? Json(std::string(to_string(*c.format))) : Json(nullptr);
  switch (c.command) {
    case Command::kEval:
      j["n"] = c.n;
      j["t"] = c.t;
      j["orthonormal"] = c.orthonormal;
      break;
    case Command::kQuad:
      j["points"] = c.points;
      break;
    case Command::kTransform:
      j["degree"] = c.degree;
      j["input"] = c.input;
      break;
    case Command::kVerify:
      j["check"] = c.check;
      j["theorem"] = c.theorem;
      j["p"] = optional_json(c.p);
      j["s"] = optional_json(c.s);
      j["q"] = optional_json(c.q);
      j["r"] = optional_json(c.r);
      j["nmin"] = optional_json(c.nmin);
      j["nmax"] = optional_json(c.nmax);
      j["trials"] = c.trials;
      j["family"] = c.family;
      j["rel_tol"] = c.rel_tol;
      j["plot"] = c.plot;
      j["trials_csv"] = c.trials_csv;
      break;
  }
  return j;
}

std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                                      std::ostream& err) {
  CLI::App app{"Generalized Gegenbauer expansions and coefficient inequality checks", "ggexp"};
  app.footer(kHelpFooter);
  app.require_subcommand(1);

  const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::kCsv}, {"json", OutputFormat::kJson}};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--lambda", config.lambda, "lambda > -1/2")->required();
    sub->add_option("--mu", config.mu, "mu >= 0")->required();
    sub->add_option("--out", config.out, "Output file (stdout when omitted)");
    sub->add_option("--format", config.format, "csv or json")->transform(CLI::CheckedTransformer(formats));
    sub->add_option("--seed", config.seed, "Base seed")->capture_default_str();
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate C_n^(lambda,mu)(t)");
  add_common(eval);
  eval->add_option("--n", config.n, "Degree")->required();
  eval->add_option("--t", config.t, "Point in [-1, 1]")->required();
  eval->add_flag("--orthonormal", config.orthonormal, "Evaluate the orthonormal polynomial");

  CLI::App* quad = app.add_subcommand("quad", "Generalized Gegenbauer quadrature rule");
  add_common(quad);
  quad->add_option("--points", config.points, "Jacobi point count N (2N nodes)")->required();

  CLI::App* transform = app.add_subcommand("transform", "Forward transform of a polynomial");
  add_common(transform);
  transform->add_option("--degree", config.degree, "Highest coefficient index")->required();
  transform->add_option("--input", config.input, "Coefficient file or family:NAME")->required();

  CLI::App* verify = app.add_subcommand("verify", "Run one verification check");
  add_common(verify);
  verify
      ->add_option("check", config.check,
                   "orthonormality|supnorm|parseval|hardy-littlewood|hausdorff-young|unified|connection|converse")
      ->required()
      ->check(CLI::IsMember({"orthonormality", "supnorm", "parseval", "hardy-littlewood", "hausdorff-young",
                             "unified", "connection", "converse"}));
  verify->add_option("--p", config.p, "Forward exponent, 1 < p <= 2");
  verify->add_option("--s", config.s, "Unified forward exponent in [p, p']");
  verify->add_option("--q", config.q, "Converse exponent, q >= 2");
  verify->add_option("--r", config.r, "Unified converse exponent in [q', q]");
  verify->add_option("--theorem", config.theorem, "Converse theorem: HL, HY or UNIFIED")->capture_default_str();
  verify->add_option("--nmin", config.nmin, "Smallest degree (supnorm)");
  verify->add_option("--nmax", config.nmax, "Degree, degree cap or sequence length");
  verify->add_option("--trials", config.trials, "Random trials")->capture_default_str();
  verify->add_option("--family", config.family, "flat|harmonic|inverse-square|single-mode|lacunary|mixed")
      ->capture_default_str();
  verify->add_option("--rel-tol", config.rel_tol, "Relative tolerance of L_p integration")->capture_default_str();
  verify->add_option("--plot", config.plot, "Plot CSV path (default: --out with .csv)");
  verify->add_option("--trials-csv", config.trials_csv, "Per-trial CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (eval->parsed()) config.command = Command::kEval;
  if (quad->parsed()) config.command = Command::kQuad;
  if (transform->parsed()) config.command = Command::kTransform;
  if (verify->parsed()) config.command = Command::kVerify;
  return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kEval: return run_eval(config, out);
      case Command::kQuad: return run_quad(config, out);
      case Command::kTransform: return run_transform(config, out);
      case Command::kVerify: return run_verify(config, out, err);
    }
    throw ArgumentError("unknown command");
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const EvaluationError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (auto code = parse_command_line(argc, argv, config, out, err)) return *code;
  return run(config, out, err);
}

}  // namespace ggexp
