#include "ggexp/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ggexp/errors.hpp"
#include "ggexp/parallel.hpp"
#include "ggexp/quadrature.hpp"

namespace ggexp {

namespace {

// Slack on the s (or r) interval ends so that s = conjugate_exponent(p)
// computed in floating point is accepted.
constexpr double kRangeSlack = 1e-12;

void require_forward_p(double p) {
  if (!(p > 1.0 && p <= 2.0)) throw DomainError("p must lie in (1, 2], got " + std::to_string(p));
}

void require_converse_q(double q) {
  if (!(q >= 2.0 && std::isfinite(q))) throw DomainError("q must lie in [2, infinity), got " + std::to_string(q));
}

bool within(double x, double lo, double hi) {
  return x >= lo * (1.0 - kRangeSlack) && x <= hi * (1.0 + kRangeSlack);
}

double require_secondary(const Exponents& e, const char* name) {
  if (!e.secondary) throw ArgumentError(std::string("the unified theorem needs the exponent ") + name);
  return *e.secondary;
}

// Deterministic draws from a standardized engine; the distribution objects of
// the standard library are implementation-defined.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int index(int count) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(count)); }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Family resolve_family(Family family, std::uint64_t seed) {
  if (family != Family::kMixed) return family;
  return static_cast<Family>(seed % 5);
}

std::vector<double> fill_profile(Family family, int length, Draws& draws) {
  std::vector<double> c(length, 0.0);
  switch (family) {
    case Family::kFlat:
      for (int n = 0; n < length; ++n) c[n] = draws.normal();
      break;
    case Family::kHarmonic:
      for (int n = 0; n < length; ++n) c[n] = draws.normal() / (n + 1.0);
      break;
    case Family::kInverseSquare:
      for (int n = 0; n < length; ++n) c[n] = draws.normal() / ((n + 1.0) * (n + 1.0));
      break;
    case Family::kSingleMode: {
      const int n = draws.index(length);
      c[n] = draws.uniform() < 0.5 ? -1.0 : 1.0;
      break;
    }
    case Family::kLacunary:
      for (int n = 1; n <= length; n *= 2) c[n - 1] = draws.normal();
      break;
    case Family::kMixed:
      throw ArgumentError("kMixed must be resolved before drawing");
  }
  return c;
}

bool is_two(double p) { return p == 2.0; }

Trial make_trial(std::uint64_t seed, double lhs, double rhs) { return {seed, lhs, rhs, lhs / rhs}; }

// Rethrows quadrature failures with the trial index in the message.
template <class Body>
void with_trial_context(std::size_t trial, Body&& body) {
  const std::string prefix = "trial " + std::to_string(trial) + ": ";
  try {
    body();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what(), e.previous(), e.last());
  } catch (const EvaluationError& e) {
    throw EvaluationError(prefix + e.what(), e.node());
  }
}

InequalityReport assemble(TheoremId id, Direction d, const BasisParams& bp, const Exponents& e,
                          std::vector<Trial> trials, bool equality_case) {
  InequalityReport report;
  report.theorem_id = id;
  report.direction = d;
  report.params = bp;
  report.exponents = e;
  report.trials = std::move(trials);
  bool ok = !report.trials.empty();
  double best = 0.0;
  for (const Trial& t : report.trials) {
    if (!std::isfinite(t.ratio)) {
      ok = false;
      best = t.ratio;
      continue;
    }
    if (std::isfinite(best)) best = std::max(best, t.ratio);
    if (equality_case && !(std::abs(t.ratio - 1.0) < kParsevalTolerance)) ok = false;
  }
  report.empirical_constant = best;
  report.pass = ok && std::isfinite(best);
  return report;
}

void require_scan_options(const ScanOptions& options) {
  if (options.trials < 1) throw ArgumentError("a scan needs at least one trial");
  if (options.degree_cap < 0) throw ArgumentError("degree cap must be non-negative");
}

// One trial set shared by several forward specs at the same p.
std::vector<std::vector<Trial>> run_forward(const BasisParams& bp, double p, const std::vector<SeqNormSpec>& specs,
                                            const ScanOptions& options) {
  require_scan_options(options);
  std::vector<std::vector<Trial>> out(specs.size(), std::vector<Trial>(options.trials));
  parallel_for(options.trials, [&](std::size_t k) {
    with_trial_context(k, [&] {
      const std::uint64_t seed = trial_seed(options.seed, k);
      const CoefficientVector cv = draw_coefficients(options.family, bp, options.degree_cap, seed);
      const TestFunction f = TestFunction::polynomial(cv);
      const CoefficientVector fhat = forward_transform(bp, f, cv.degree());
      const double rhs = lp_norm(bp, f, p, options.lp);
      for (std::size_t j = 0; j < specs.size(); ++j) out[j][k] = make_trial(seed, seq_functional(specs[j], fhat), rhs);
    });
  });
  return out;
}

}  // namespace

double conjugate_exponent(double p) {
  if (!(p > 1.0) || std::isinf(p)) throw DomainError("conjugate exponent needs 1 < p < infinity, got " + std::to_string(p));
  return p / (p - 1.0);
}

SeqNormSpec::SeqNormSpec(double outer, double weight) : outer_exponent(outer), weight_power(weight) {
  if (!(outer >= 1.0) || !std::isfinite(outer)) throw DomainError("outer exponent must be finite and >= 1");
  if (!std::isfinite(weight)) throw DomainError("weight power must be finite");
}

double seq_functional(const SeqNormSpec& spec, std::span<const double> coeffs) {
  std::vector<double> terms(coeffs.size());
  double top = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    terms[n] = std::pow(static_cast<double>(n + 1), spec.weight_power) * std::abs(coeffs[n]);
    top = std::max(top, terms[n]);
  }
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : terms) sum += std::pow(x / top, spec.outer_exponent);
  return top * std::pow(sum, 1.0 / spec.outer_exponent);
}

double seq_functional(const SeqNormSpec& spec, const CoefficientVector& cv) { return seq_functional(spec, cv.coeffs); }

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::kHardyLittlewood:
      return "HL";
    case TheoremId::kHausdorffYoung:
      return "HY";
    case TheoremId::kUnified:
      return "UNIFIED";
  }
  return "?";
}

std::string_view to_string(Direction d) { return d == Direction::kForward ? "forward" : "converse"; }

SeqNormSpec hl_spec(const BasisParams& bp, double p) {
  require_forward_p(p);
  const double pc = conjugate_exponent(p);
  return {p, (1.0 / pc - 1.0 / p) * (bp.sigma() + 1.0)};
}

SeqNormSpec hy_spec(const BasisParams& bp, double p) {
  require_forward_p(p);
  const double pc = conjugate_exponent(p);
  return {pc, (1.0 / pc - 1.0 / p) * bp.sigma()};
}

SeqNormSpec unified_spec(const BasisParams& bp, double p, double s) {
  require_forward_p(p);
  const double pc = conjugate_exponent(p);
  if (!within(s, p, pc)) {
    throw DomainError("s must lie in [p, p'] = [" + std::to_string(p) + ", " + std::to_string(pc) + "], got " +
                      std::to_string(s));
  }
  const double sigma = bp.sigma();
  return {s, (1.0 / s - 1.0 / p) * sigma + (1.0 / pc - 1.0 / s) * (sigma + 1.0)};
}

double hl_functional(const BasisParams& bp, double p, const CoefficientVector& cv) {
  return seq_functional(hl_spec(bp, p), cv);
}

double hy_functional(const BasisParams& bp, double p, const CoefficientVector& cv) {
  return seq_functional(hy_spec(bp, p), cv);
}

double unified_functional(const BasisParams& bp, double p, double s, const CoefficientVector& cv) {
  return seq_functional(unified_spec(bp, p, s), cv);
}

SeqNormSpec hl_converse_spec(const BasisParams& bp, double q) {
  require_converse_q(q);
  const double qc = conjugate_exponent(q);
  return {q, (1.0 / qc - 1.0 / q) * (bp.sigma() + 1.0)};
}

SeqNormSpec hy_converse_spec(const BasisParams& bp, double q) {
  require_converse_q(q);
  const double qc = conjugate_exponent(q);
  return {qc, (1.0 / qc - 1.0 / q) * bp.sigma()};
}

SeqNormSpec unified_converse_spec(const BasisParams& bp, double q, double r) {
  require_converse_q(q);
  const double qc = conjugate_exponent(q);
  if (!within(r, qc, q)) {
    throw DomainError("r must lie in [q', q] = [" + std::to_string(qc) + ", " + std::to_string(q) + "], got " +
                      std::to_string(r));
  }
  const double rc = conjugate_exponent(r);
  const double sigma = bp.sigma();
  return {rc, (1.0 / qc - 1.0 / r) * sigma + (1.0 / r - 1.0 / q) * (sigma + 1.0)};
}

SeqNormSpec forward_spec(TheoremId id, const BasisParams& bp, const Exponents& e) {
  switch (id) {
    case TheoremId::kHardyLittlewood:
      return hl_spec(bp, e.primary);
    case TheoremId::kHausdorffYoung:
      return hy_spec(bp, e.primary);
    case TheoremId::kUnified:
      return unified_spec(bp, e.primary, require_secondary(e, "s"));
  }
  throw ArgumentError("unknown theorem");
}

SeqNormSpec converse_spec(TheoremId id, const BasisParams& bp, const Exponents& e) {
  switch (id) {
    case TheoremId::kHardyLittlewood:
      return hl_converse_spec(bp, e.primary);
    case TheoremId::kHausdorffYoung:
      return hy_converse_spec(bp, e.primary);
    case TheoremId::kUnified:
      return unified_converse_spec(bp, e.primary, require_secondary(e, "r"));
  }
  throw ArgumentError("unknown theorem");
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kFlat:
      return "flat";
    case Family::kHarmonic:
      return "harmonic";
    case Family::kInverseSquare:
      return "inverse-square";
    case Family::kSingleMode:
      return "single-mode";
    case Family::kLacunary:
      return "lacunary";
    case Family::kMixed:
      return "mixed";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::kFlat, Family::kHarmonic, Family::kInverseSquare, Family::kSingleMode, Family::kLacunary,
                   Family::kMixed}) {
    if (to_string(f) == name) return f;
  }
  throw ArgumentError("unknown test-function family '" + std::string(name) + "'");
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(trial));
}

CoefficientVector draw_coefficients(Family family, const BasisParams& bp, int degree_cap, std::uint64_t seed) {
  if (degree_cap < 0) throw ArgumentError("degree cap must be non-negative");
  Draws draws(seed);
  const int degree = draws.index(degree_cap + 1);
  return {bp, fill_profile(resolve_family(family, seed), degree + 1, draws)};
}

CoefficientVector draw_sequence(Family family, const BasisParams& bp, int length, std::uint64_t seed) {
  if (length < 1) throw ArgumentError("sequence length must be positive");
  Draws draws(seed);
  return {bp, fill_profile(resolve_family(family, seed), length, draws)};
}

InequalityReport forward_inequality_scan(TheoremId id, const BasisParams& bp, const Exponents& e,
                                         const ScanOptions& options) {
  const SeqNormSpec spec = forward_spec(id, bp, e);
  auto trials = run_forward(bp, e.primary, {spec}, options);
  return assemble(id, Direction::kForward, bp, e, std::move(trials[0]), is_two(e.primary));
}

ForwardScanSet forward_scan_all(const BasisParams& bp, double p, double s, const ScanOptions& options) {
  const Exponents plain{p, std::nullopt};
  const Exponents mixed{p, s};
  const std::vector<SeqNormSpec> specs{hl_spec(bp, p), hy_spec(bp, p), unified_spec(bp, p, s)};
  auto trials = run_forward(bp, p, specs, options);
  const bool equality = is_two(p);
  return {assemble(TheoremId::kHardyLittlewood, Direction::kForward, bp, plain, std::move(trials[0]), equality),
          assemble(TheoremId::kHausdorffYoung, Direction::kForward, bp, plain, std::move(trials[1]), equality),
          assemble(TheoremId::kUnified, Direction::kForward, bp, mixed, std::move(trials[2]), equality)};
}

ConverseResult converse_reconstruction(TheoremId id, const BasisParams& bp, const Exponents& e,
                                       const CoefficientVector& phi, std::span<const int> checkpoints,
                                       const LpOptions& lp) {
  const SeqNormSpec spec = converse_spec(id, bp, e);
  const double q = e.primary;
  if (phi.coeffs.empty()) throw ArgumentError("converse reconstruction needs a non-empty phi");
  if (checkpoints.empty()) throw ArgumentError("converse reconstruction needs at least one checkpoint");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 0) throw ArgumentError("checkpoints must be non-negative");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) throw ArgumentError("checkpoints must be strictly increasing");
  }

  const int length = static_cast<int>(phi.size());
  auto phi_at = [&](int n) { return n < length ? phi.coeffs[n] : 0.0; };
  auto partial = [&](int degree) {
    std::vector<double> c(degree + 1);
    for (int n = 0; n <= degree; ++n) c[n] = phi_at(n);
    return CoefficientVector(bp, std::move(c));
  };

  ConverseResult result;
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    const int lo = checkpoints[i - 1];
    const int hi = checkpoints[i];
    std::vector<double> diff(hi + 1, 0.0);
    for (int n = lo + 1; n <= hi; ++n) diff[n] = -phi_at(n);
    const double gap = lp_norm(bp, TestFunction::polynomial(CoefficientVector(bp, std::move(diff))), q, lp);
    result.checkpoint_gaps.push_back(gap);
    if (lo >= length) result.limit_check = std::max(result.limit_check, gap);
  }

  const int final_degree = checkpoints.back();
  const TestFunction final_phi = TestFunction::polynomial(partial(final_degree));
  const CoefficientVector recovered = forward_transform(bp, final_phi, std::max(final_degree, length - 1));
  for (std::size_t n = 0; n < recovered.size(); ++n) {
    result.coeff_recovery_error =
        std::max(result.coeff_recovery_error, std::abs(recovered.coeffs[n] - phi_at(static_cast<int>(n))));
  }
  result.lhs = lp_norm(bp, final_phi, q, lp);
  result.rhs = seq_functional(spec, phi);
  result.norm_bound_ratio = result.lhs / result.rhs;
  return result;
}

std::vector<int> default_checkpoints(int length) {
  if (length < 1) throw ArgumentError("sequence length must be positive");
  std::vector<int> out{length / 2, length, (3 * length) / 2, 2 * length};
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.front() == 0) out.erase(out.begin());
  return out;
}

ConverseScan converse_scan(TheoremId id, const BasisParams& bp, const Exponents& e, const ScanOptions& options) {
  require_scan_options(options);
  if (options.degree_cap < 1) throw ArgumentError("converse scans need a sequence length of at least 1");
  converse_spec(id, bp, e);
  const std::vector<int> checkpoints = default_checkpoints(options.degree_cap);
  std::vector<Trial> trials(options.trials);
  std::vector<ConverseResult> results(options.trials);
  parallel_for(options.trials, [&](std::size_t k) {
    with_trial_context(k, [&] {
      const std::uint64_t seed = trial_seed(options.seed, k);
      const CoefficientVector phi = draw_sequence(options.family, bp, options.degree_cap, seed);
      results[k] = converse_reconstruction(id, bp, e, phi, checkpoints, options.lp);
      trials[k] = make_trial(seed, results[k].lhs, results[k].rhs);
    });
  });

  ConverseScan scan;
  for (const ConverseResult& r : results) {
    scan.max_limit_check = std::max(scan.max_limit_check, r.limit_check);
    scan.max_coeff_recovery_error = std::max(scan.max_coeff_recovery_error, r.coeff_recovery_error);
  }
  scan.report = assemble(id, Direction::kConverse, bp, e, std::move(trials), is_two(e.primary));
  scan.report.pass = scan.report.pass && scan.max_limit_check < kConverseTolerance &&
                     scan.max_coeff_recovery_error < kConverseTolerance;
  return scan;
}

double connection_integral(const BasisParams& bp, int n, double t) {
  bp.require_positive_mu("connection_check");
  if (n < 0) throw ArgumentError("degree must be non-negative");
  if (!(std::abs(t) <= 1.0)) throw DomainError("evaluation point must lie in [-1, 1]");
  const double mu = bp.mu();
  const double lam = bp.lambda() + mu;
  // Integrand degree in x is n + 1; only the part of (1 + x) matching the
  // parity of C_n survives the symmetric weight.
  const auto rule = gauss_jacobi_rule(JacobiParams(mu - 1.0, mu - 1.0), n / 2 + 2);
  const bool odd = n % 2 == 1;
  const double sum = integrate(*rule, [&](double x) {
    const double c = gegenbauer_eval(lam, n, t * x);
    return odd ? x * c : c;
  });
  const double num[] = {mu + 0.5};
  const double den[] = {0.5, mu};
  return std::exp(log_gamma_ratio(num, den)) * sum;
}

double connection_check(const BasisParams& bp, int n, std::span<const double> t_grid) {
  bp.require_positive_mu("connection_check");
  double worst = 0.0;
  for (double t : t_grid) {
    worst = std::max(worst, std::abs(connection_integral(bp, n, t) - gen_gegenbauer_eval(bp, n, t)));
  }
  return worst;
}

}  // namespace ggexp
