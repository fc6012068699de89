#include "ggexp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ggexp/errors.hpp"
#include "ggexp/expansion.hpp"
#include "ggexp/parallel.hpp"
#include "ggexp/quadrature.hpp"

namespace ggexp {

namespace {

constexpr int kRoundTripGrid = 512;
constexpr int kConnectionGrid = 65;

double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

void require_positive(int value, const char* name) {
  if (value < 1) throw ArgumentError(std::string(name) + " must be positive");
}

double max_ratio_or_zero(const std::vector<Trial>& trials) {
  double m = 0.0;
  for (const Trial& t : trials) m = std::max(m, t.ratio);
  return m;
}

}  // namespace

double VerificationReport::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  throw ArgumentError("report has no metric '" + name + "'");
}

Json to_json(const VerificationReport& report) {
  Json metrics = Json::object();
  for (const auto& [key, value] : report.metrics) metrics[key] = value;
  Json series = Json::array();
  for (const auto& [x, y] : report.series) series.push_back({{"x", x}, {"ratio", y}});
  Json reports = Json::array();
  for (const auto& r : report.reports) reports.push_back(to_json(r));
  return {{"check", report.check},  {"params", to_json(report.params)}, {"asserted", report.asserted},
          {"pass", report.pass},    {"metrics", metrics},                {"series", series},
          {"reports", reports}};
}

VerificationReport verify_orthonormality(const BasisParams& bp, int nmax) {
  if (nmax < 0) throw ArgumentError("nmax must be non-negative");
  const auto rule = gen_gegenbauer_rule(bp, gen_gegenbauer_points_for_exactness(2 * nmax));
  const OrthonormalBasis basis(bp, nmax);
  const std::size_t m = static_cast<std::size_t>(nmax) + 1;
  std::vector<double> gram(m * m, 0.0);
  std::vector<double> vals(m);
  for (std::size_t k = 0; k < rule->size(); ++k) {
    basis.eval_all(rule->nodes[k], vals);
    const double w = rule->weights[k];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j <= i; ++j) gram[i * m + j] += w * vals[i] * vals[j];
    }
  }
  VerificationReport out;
  out.check = "orthonormality";
  out.params = bp;
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double g = i >= j ? gram[i * m + j] : gram[j * m + i];
      row = std::max(row, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
    out.series.emplace_back(static_cast<double>(i), row);
    worst = std::max(worst, row);
  }
  const double cert = certify_exactness(*rule);
  out.metrics = {{"max_gram_error", worst}, {"certification_residual", cert}};
  out.pass = worst < kOrthonormalityTolerance && cert <= kExactnessTolerance;
  return out;
}

double log_log_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ArgumentError("slope needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxy += dx * (std::log(y) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

VerificationReport verify_supnorm(const BasisParams& bp, int nmin, int nmax) {
  if (nmin < 1 || nmax <= nmin) throw ArgumentError("supnorm needs 1 <= nmin < nmax");
  const std::size_t count = static_cast<std::size_t>(nmax - nmin) + 1;
  std::vector<double> r(count);
  parallel_for(count, [&](std::size_t k) {
    const int n = nmin + static_cast<int>(k);
    r[k] = sup_norm_estimate(bp, n) / std::pow(static_cast<double>(n), bp.sigma());
  });
  VerificationReport out;
  out.check = "supnorm";
  out.params = bp;
  for (std::size_t k = 0; k < count; ++k) out.series.emplace_back(static_cast<double>(nmin + k), r[k]);
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const double spread = *hi / *lo;
  out.metrics = {{"spread", spread}, {"slope", log_log_slope(out.series)}};
  out.asserted = bp.mu() > 0.0;
  out.pass = !out.asserted || spread < kSupSpreadBound;
  return out;
}

VerificationReport verify_parseval(const BasisParams& bp, int degree, int trials, std::uint64_t seed) {
  if (degree < 0) throw ArgumentError("degree must be non-negative");
  require_positive(trials, "trials");
  std::vector<double> parseval(trials), roundtrip(trials), ratio(trials);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t k) {
    std::mt19937_64 rng(trial_seed(seed, k));
    std::vector<double> a(static_cast<std::size_t>(degree) + 1);
    for (double& x : a) x = uniform_pm1(rng);
    // Opaque to the transform: only point values and the degree bound are visible.
    const auto p = TestFunction::polynomial(CoefficientVector(bp, a));
    const auto f = TestFunction::callable([&p](double t) { return p(t); }, degree);
    const ParsevalResult pr = parseval_check(bp, f, degree);
    parseval[k] = std::abs(pr.lhs - pr.rhs) / pr.rhs;
    ratio[k] = pr.lhs / pr.rhs;
    const CoefficientVector cv = forward_transform(bp, f, degree);
    double sup = 0.0;
    double err = 0.0;
    for (int i = 0; i < kRoundTripGrid; ++i) {
      const double t = -1.0 + 2.0 * i / (kRoundTripGrid - 1);
      const double v = p(t);
      sup = std::max(sup, std::abs(v));
      err = std::max(err, std::abs(partial_sum_eval(cv, t) - v));
    }
    roundtrip[k] = err / (1.0 + sup);
  });
  VerificationReport out;
  out.check = "parseval";
  out.params = bp;
  for (int k = 0; k < trials; ++k) out.series.emplace_back(static_cast<double>(k), ratio[k]);
  const double pmax = *std::max_element(parseval.begin(), parseval.end());
  const double rmax = *std::max_element(roundtrip.begin(), roundtrip.end());
  out.metrics = {{"max_parseval_rel_error", pmax}, {"max_roundtrip_error", rmax}};
  out.pass = pmax < kParsevalRelTolerance && rmax < kRoundTripTolerance;
  return out;
}

VerificationReport verify_forward(TheoremId id, const BasisParams& bp, const Exponents& e,
                                  const ScanOptions& options) {
  require_positive(options.degree_cap, "degree cap");
  ScanOptions half = options;
  half.degree_cap = std::max(1, options.degree_cap / 2);
  InequalityReport full = forward_inequality_scan(id, bp, e, options);
  InequalityReport low = forward_inequality_scan(id, bp, e, half);
  VerificationReport out;
  out.check = std::string(to_string(id)) + "-forward";
  out.params = bp;
  for (std::size_t k = 0; k < full.trials.size(); ++k) out.series.emplace_back(static_cast<double>(k), full.trials[k].ratio);
  const double growth = full.empirical_constant / low.empirical_constant;
  out.metrics = {{"empirical_constant", full.empirical_constant},
                 {"empirical_constant_half_cap", low.empirical_constant},
                 {"growth", growth}};
  out.pass = full.pass && low.pass && growth < kGrowthBound;
  if (id == TheoremId::kUnified) {
    const double p = e.primary;
    const double pc = conjugate_exponent(p);
    double hl_err = 0.0;
    double hy_err = 0.0;
    for (const Trial& t : full.trials) {
      const auto cv = draw_coefficients(options.family, bp, options.degree_cap, t.seed);
      const double hl = hl_functional(bp, p, cv);
      const double hy = hy_functional(bp, p, cv);
      hl_err = std::max(hl_err, std::abs(unified_functional(bp, p, p, cv) - hl) / hl);
      hy_err = std::max(hy_err, std::abs(unified_functional(bp, p, pc, cv) - hy) / hy);
    }
    out.metrics.emplace_back("collapse_hl_error", hl_err);
    out.metrics.emplace_back("collapse_hy_error", hy_err);
    out.pass = out.pass && hl_err < kCollapseTolerance && hy_err < kCollapseTolerance;
  }
  out.reports = {std::move(full), std::move(low)};
  return out;
}

VerificationReport verify_converse(TheoremId id, const BasisParams& bp, const Exponents& e,
                                   const ScanOptions& options) {
  ConverseScan scan = converse_scan(id, bp, e, options);
  VerificationReport out;
  out.check = std::string(to_string(id)) + "-converse";
  out.params = bp;
  for (std::size_t k = 0; k < scan.report.trials.size(); ++k) {
    out.series.emplace_back(static_cast<double>(k), scan.report.trials[k].ratio);
  }
  out.metrics = {{"empirical_constant", max_ratio_or_zero(scan.report.trials)},
                 {"max_limit_check", scan.max_limit_check},
                 {"max_coeff_recovery_error", scan.max_coeff_recovery_error}};
  out.pass = scan.report.pass;
  out.reports = {std::move(scan.report)};
  return out;
}

VerificationReport verify_connection(const BasisParams& bp, int nmax) {
  bp.require_positive_mu("connection");
  if (nmax < 0) throw ArgumentError("nmax must be non-negative");
  std::vector<double> grid(kConnectionGrid);
  for (int k = 0; k < kConnectionGrid; ++k) grid[k] = -1.0 + 2.0 * k / (kConnectionGrid - 1);
  VerificationReport out;
  out.check = "connection";
  out.params = bp;
  double worst = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    const double err = connection_check(bp, n, grid);
    out.series.emplace_back(static_cast<double>(n), err);
    worst = std::max(worst, err);
  }
  const double expected = (bp.lambda() + bp.mu()) / (bp.mu() + 0.5);
  const double slope_err = std::abs(connection_integral(bp, 1, 1.0) - expected) / std::max(1.0, std::abs(expected));
  out.metrics = {{"max_grid_error", worst}, {"slope_error", slope_err}};
  out.pass = worst < kConnectionTolerance && slope_err < kConnectionSlopeTolerance;
  return out;
}

}  // namespace ggexp
