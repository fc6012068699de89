#pragma once

// Forward and inverse generalized Gegenbauer transforms, weighted L_p norms and
// sup-norm estimation.

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ggexp/special_poly.hpp"

namespace ggexp {

/// Coefficients against the orthonormal basis C̃_0 .. C̃_N.
struct CoefficientVector {
  BasisParams params;
  std::vector<double> coeffs;

  /// Throws DomainError on a non-finite entry.
  CoefficientVector(const BasisParams& bp, std::vector<double> values);

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  std::size_t size() const noexcept { return coeffs.size(); }

  /// e_n of length n + 1.
  static CoefficientVector unit(const BasisParams& bp, int n);
};

/// A function on [-1, 1] handed to the transforms: either a polynomial given by
/// its orthonormal coefficients or an arbitrary callable. A callable may carry
/// a polynomial degree bound, which lets norms and transforms use exact rules.
class TestFunction {
 public:
  enum class Kind { kPolynomial, kCallable };

  static TestFunction polynomial(CoefficientVector cv);
  static TestFunction callable(std::function<double(double)> f, std::optional<int> degree_bound = {});

  Kind kind() const noexcept { return kind_; }
  double operator()(double t) const;

  /// Non-null only for kPolynomial.
  const CoefficientVector* coefficients() const noexcept { return coeffs_ ? &*coeffs_ : nullptr; }
  /// Polynomial degree (kPolynomial) or the declared bound (kCallable).
  std::optional<int> degree_bound() const noexcept { return degree_; }

 private:
  TestFunction() = default;

  Kind kind_ = Kind::kCallable;
  std::optional<CoefficientVector> coeffs_;
  std::shared_ptr<const OrthonormalBasis> basis_;
  std::function<double(double)> fn_;
  std::optional<int> degree_;
};

/// Relative tolerance for coefficients of general (non-polynomial) functions.
inline constexpr double kTransformRelTol = 1e-11;

/// f̂_0 .. f̂_degree. Polynomial inputs use one rule with exactness
/// >= 2 max(degree, deg f) + 1; general callables go through integrate_converged.
CoefficientVector forward_transform(const BasisParams& bp, const TestFunction& f, int degree);

/// sum_n coeffs_n C̃_n(t).
double partial_sum_eval(const CoefficientVector& cv, double t);

/// Options for lp_norm.
struct LpOptions {
  double rel_tol = 1e-11;
  /// Grid resolution for p = infinity on callables without a degree bound.
  int sup_grid = 4096;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||f||_{L_p(v)} for 1 <= p < infinity, or the sampled sup-norm for p = infinity.
///
/// Even-integer p on a polynomial is integrated exactly. Other p on a
/// polynomial split [-1, 1] at the polynomial's real zeros, at the real parts
/// of near-real complex roots, at 0 and at the endpoints, and integrate each
/// piece with a Gauss-Jacobi rule whose exponents match the endpoint behavior
/// (|t - z|^p at a zero, |t|^{2 mu} at 0, (1 -+ t)^{lambda - 1/2} at -+1),
/// doubling per piece until converged. Callables without a degree bound go
/// through integrate_converged.
double lp_norm(const BasisParams& bp, const TestFunction& f, double p, const LpOptions& options = {});

struct ParsevalResult {
  double lhs = 0.0;  // ||f||_{L_2(v)}
  double rhs = 0.0;  // l_2 norm of the forward transform
};

/// Requires a polynomial (or degree-bounded callable) of degree <= `degree`.
ParsevalResult parseval_check(const BasisParams& bp, const TestFunction& f, int degree);

/// Grid size used by the sup-norm estimator for a degree-n polynomial.
int sup_norm_grid_size(int n);

/// max |f| on [a, b]: Chebyshev-Lobatto grid of `grid_size` points, then golden
/// section search on every local grid maximum down to width 1e-12. A lower
/// bound on the true sup.
double sup_abs_estimate(const std::function<double(double)>& f, double a, double b, int grid_size);

/// Estimate of max_{[-1,1]} |C̃_n|.
double sup_norm_estimate(const BasisParams& bp, int n);

/// Same estimator restricted to [a, b] within [-1, 1].
double sup_norm_estimate_on(const BasisParams& bp, int n, double a, double b);

/// b_1 .. b_n of the recurrence t C̃_k = b_{k+1} C̃_{k+1} + b_k C̃_{k-1}
/// (the diagonal vanishes for the symmetric weight).
std::vector<double> recurrence_offdiagonal(const BasisParams& bp, int n);

/// Complex roots of sum_n c_n C̃_n as eigenvalues of the colleague matrix
/// (the recurrence matrix with its last row corrected by the coefficients).
/// Trailing coefficients below 1e-14 of the largest are dropped first.
std::vector<std::complex<double>> polynomial_roots(const CoefficientVector& cv);

/// Sign changes of sum_n c_n C̃_n in [-1, 1], sorted. Root estimates from
/// polynomial_roots are bracketed and refined by the Illinois method.
std::vector<double> real_zeros(const CoefficientVector& cv);

}  // namespace ggexp
