#pragma once

// Weighted coefficient functionals, seeded test-function families, and the
// forward / converse inequality checks built on them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ggexp/expansion.hpp"
#include "ggexp/special_poly.hpp"

namespace ggexp {

/// p' with 1/p + 1/p' = 1. Requires 1 < p < infinity.
double conjugate_exponent(double p);

/// ( sum_n ((n+1)^weight_power |c_n|)^outer_exponent )^(1/outer_exponent).
struct SeqNormSpec {
  double outer_exponent;
  double weight_power;

  /// Throws DomainError unless outer_exponent >= 1 and both fields are finite.
  SeqNormSpec(double outer, double weight);
};

/// Evaluated with the largest term factored out, so huge or tiny weights do not
/// overflow.
double seq_functional(const SeqNormSpec& spec, std::span<const double> coeffs);
double seq_functional(const SeqNormSpec& spec, const CoefficientVector& cv);

enum class TheoremId { kHardyLittlewood, kHausdorffYoung, kUnified };
enum class Direction { kForward, kConverse };

std::string_view to_string(TheoremId id);
std::string_view to_string(Direction d);

/// Exponents of one check. `primary` is p for forward checks and q for
/// converse checks; `secondary` is s (forward) or r (converse) and is used by
/// the unified theorem only.
struct Exponents {
  double primary = 2.0;
  std::optional<double> secondary;
};

/// Forward specs, 1 < p <= 2.
SeqNormSpec hl_spec(const BasisParams& bp, double p);
SeqNormSpec hy_spec(const BasisParams& bp, double p);
/// Requires p <= s <= p'.
SeqNormSpec unified_spec(const BasisParams& bp, double p, double s);

double hl_functional(const BasisParams& bp, double p, const CoefficientVector& cv);
double hy_functional(const BasisParams& bp, double p, const CoefficientVector& cv);
double unified_functional(const BasisParams& bp, double p, double s, const CoefficientVector& cv);

/// Right-hand sides of the converse bounds, 2 <= q < infinity.
SeqNormSpec hl_converse_spec(const BasisParams& bp, double q);
SeqNormSpec hy_converse_spec(const BasisParams& bp, double q);
/// Requires q' <= r <= q.
SeqNormSpec unified_converse_spec(const BasisParams& bp, double q, double r);

/// Dispatch on the theorem; validates the exponents for it.
SeqNormSpec forward_spec(TheoremId id, const BasisParams& bp, const Exponents& e);
SeqNormSpec converse_spec(TheoremId id, const BasisParams& bp, const Exponents& e);

/// Coefficient profiles for random test polynomials. kMixed cycles through
/// the first five by trial index.
enum class Family { kFlat, kHarmonic, kInverseSquare, kSingleMode, kLacunary, kMixed };

std::string_view to_string(Family f);
/// Accepts the names printed by to_string; throws ArgumentError otherwise.
Family parse_family(std::string_view name);

/// Deterministic per-trial seed derived from (seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

/// Random coefficients of degree <= degree_cap drawn from `family`. The degree
/// and the entries depend only on (family, degree_cap, seed).
CoefficientVector draw_coefficients(Family family, const BasisParams& bp, int degree_cap, std::uint64_t seed);

/// Random sequence of exactly `length` entries with the profile of `family`.
CoefficientVector draw_sequence(Family family, const BasisParams& bp, int length, std::uint64_t seed);

struct Trial {
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct InequalityReport {
  TheoremId theorem_id = TheoremId::kHardyLittlewood;
  Direction direction = Direction::kForward;
  BasisParams params{0.5, 0.0};
  Exponents exponents;
  std::vector<Trial> trials;
  double empirical_constant = 0.0;
  bool pass = false;
};

/// Tolerance on |ratio - 1| for the p = 2 (or q = 2) equality cases.
inline constexpr double kParsevalTolerance = 1e-8;

struct ScanOptions {
  Family family = Family::kMixed;
  int degree_cap = 64;
  int trials = 100;
  std::uint64_t seed = 0;
  LpOptions lp;
};

/// ratio = functional(forward_transform(f)) / ||f||_{L_p(v)} for seeded random
/// polynomials f. pass: every ratio finite and, when p = 2, within
/// kParsevalTolerance of 1.
InequalityReport forward_inequality_scan(TheoremId id, const BasisParams& bp, const Exponents& e,
                                         const ScanOptions& options);

/// The three forward theorems at one p share the L_p norms; this evaluates all
/// of them from a single set of trials. `s` is used by the unified entry.
struct ForwardScanSet {
  InequalityReport hardy_littlewood;
  InequalityReport hausdorff_young;
  InequalityReport unified;
};
ForwardScanSet forward_scan_all(const BasisParams& bp, double p, double s, const ScanOptions& options);

struct ConverseResult {
  /// max ||Phi_N - Phi_N'||_{L_q} over consecutive checkpoints with N >= len(phi).
  double limit_check = 0.0;
  /// max_n |forward_transform(Phi_final)_n - phi(n)|.
  double coeff_recovery_error = 0.0;
  /// ||Phi_final||_{L_q} / converse functional of phi.
  double norm_bound_ratio = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// ||Phi_N - Phi_N'|| for every consecutive checkpoint pair, in order.
  std::vector<double> checkpoint_gaps;
};

/// Requires q >= 2 finite, a non-empty phi and strictly increasing checkpoints.
ConverseResult converse_reconstruction(TheoremId id, const BasisParams& bp, const Exponents& e,
                                       const CoefficientVector& phi, std::span<const int> checkpoints,
                                       const LpOptions& lp = {});

/// Tolerance on limit_check and coeff_recovery_error.
inline constexpr double kConverseTolerance = 1e-10;

struct ConverseScan {
  InequalityReport report;
  double max_limit_check = 0.0;
  double max_coeff_recovery_error = 0.0;
};

/// Checkpoints L/2, L, 3L/2, 2L for a sequence of length L (at least 1).
std::vector<int> default_checkpoints(int length);

/// Converse checks over seeded random phi of length options.degree_cap, with
/// default_checkpoints. Trial lhs/rhs are ||Phi||_{L_q} and the functional.
/// pass: ratios finite, both errors below kConverseTolerance, and ratio within
/// kParsevalTolerance of 1 when q = 2.
ConverseScan converse_scan(TheoremId id, const BasisParams& bp, const Exponents& e, const ScanOptions& options);

/// max over t_grid of |c_mu int C_n^{lambda+mu}(t x)(1+x)(1-x^2)^{mu-1} dx - C_n^{(lambda,mu)}(t)|.
/// Requires mu > 0.
double connection_check(const BasisParams& bp, int n, std::span<const double> t_grid);

/// The right-hand side of the connection identity at one t.
double connection_integral(const BasisParams& bp, int n, double t);

}  // namespace ggexp
