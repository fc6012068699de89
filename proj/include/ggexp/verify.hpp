#pragma once

// Self-contained verification checks, each producing one VerificationReport.
// The CLI `verify` subcommands and the acceptance suite share these.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ggexp/inequalities.hpp"
#include "ggexp/io.hpp"

namespace ggexp {

struct VerificationReport {
  std::string check;
  BasisParams params{0.5, 0.0};
  /// False when the check is reported for information only; pass is then true.
  bool asserted = true;
  bool pass = false;
  /// Named scalar results, in emission order.
  std::vector<std::pair<std::string, double>> metrics;
  /// Plot-ready (x, ratio) pairs.
  std::vector<std::pair<double, double>> series;
  std::vector<InequalityReport> reports;

  double metric(const std::string& name) const;
};

Json to_json(const VerificationReport& report);

inline constexpr double kOrthonormalityTolerance = 1e-10;
inline constexpr double kParsevalRelTolerance = 1e-10;
inline constexpr double kRoundTripTolerance = 1e-10;
inline constexpr double kSupSpreadBound = 10.0;
inline constexpr double kSupSlopeBound = 0.1;
inline constexpr double kCollapseTolerance = 1e-12;
inline constexpr double kGrowthBound = 2.0;
inline constexpr double kConnectionTolerance = 1e-9;
inline constexpr double kConnectionSlopeTolerance = 1e-11;

/// Gram matrix of C̃_0 .. C̃_nmax under gen_gegenbauer_rule, plus monomial
/// certification of that rule. Metrics: max_gram_error, certification_residual.
/// Series: (n, max_m |G_nm - delta_nm|).
VerificationReport verify_orthonormality(const BasisParams& bp, int nmax);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<std::pair<double, double>>& points);

/// r_n = sup_norm_estimate(n) / n^sigma for n = nmin .. nmax. Metrics: spread
/// (max r / min r) and slope (log r against log n). pass: spread < 10. Not
/// asserted when mu = 0. Series: (n, r_n).
VerificationReport verify_supnorm(const BasisParams& bp, int nmin, int nmax);

/// `trials` seeded polynomials with uniform orthonormal coefficients of
/// degree <= `degree`, handed to the transform as opaque callables. Metrics: max_parseval_rel_error
/// (| ||f||_2 - l_2(f̂) | / l_2(f̂)) and max_roundtrip_error (grid error of the
/// partial sum over 1 + sup|f|). Series: (trial, ||f||_2 / l_2(f̂)).
VerificationReport verify_parseval(const BasisParams& bp, int degree, int trials, std::uint64_t seed);

/// Forward scan of one theorem at options.degree_cap and at half of it.
/// Metrics: empirical_constant, empirical_constant_half_cap, growth (their
/// ratio). pass: scan pass and growth < 2. The unified check also compares the
/// unified functional at s = p and s = p' with HL and HY on the trial
/// coefficients (collapse_hl_error, collapse_hy_error < 1e-12 relative).
/// Series: (trial, ratio) at the full cap.
VerificationReport verify_forward(TheoremId id, const BasisParams& bp, const Exponents& e,
                                  const ScanOptions& options);

/// converse_scan with sequences of length options.degree_cap. Metrics:
/// empirical_constant, max_limit_check, max_coeff_recovery_error.
/// Series: (trial, ratio).
VerificationReport verify_converse(TheoremId id, const BasisParams& bp, const Exponents& e,
                                   const ScanOptions& options);

/// Connection identity for n = 0 .. nmax on a 65-point grid, and the n = 1
/// slope against (lambda + mu) / (mu + 1/2), relative to max(1, |slope|).
/// Requires mu > 0. Metrics:
/// max_grid_error, slope_error. Series: (n, grid error).
VerificationReport verify_connection(const BasisParams& bp, int nmax);

}  // namespace ggexp
