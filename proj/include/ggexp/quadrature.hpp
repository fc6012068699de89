#pragma once

// Gaussian rules for the Jacobi weight and for the generalized Gegenbauer
// weight v_{lambda,mu}(t) = |t|^{2 mu} (1 - t^2)^{lambda - 1/2}.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ggexp/errors.hpp"
#include "ggexp/special_poly.hpp"

namespace ggexp {

/// N-point Gauss rule for (1 - t)^alpha (1 + t)^beta on [-1, 1].
struct GaussJacobiRule {
  JacobiParams params;
  std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
  std::vector<double> weights;  // positive
  int exactness_degree = 0;     // 2N - 1

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Symmetric rule for v_{lambda,mu} built from an N-point Jacobi rule in s = 2t^2 - 1.
struct GenGegenbauerRule {
  BasisParams params;
  std::vector<double> nodes;    // increasing, symmetric about 0, never 0
  std::vector<double> weights;  // positive, equal for t and -t
  int exactness_degree = 0;     // 4N - 1
  int jacobi_points = 0;        // N

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Integral of the Jacobi weight: 2^{a+b+1} B(a+1, b+1).
double jacobi_total_mass(const JacobiParams& params);

/// Integral of v_{lambda,mu}: B(mu + 1/2, lambda + 1/2).
double weight_total_mass(const BasisParams& bp);

/// v_{lambda,mu}(t).
double weight_value(const BasisParams& bp, double t);

/// Golub-Welsch nodes polished by Newton steps on the orthonormal recurrence,
/// Christoffel weights. Not cached. Throws ArgumentError when n_points < 1.
GaussJacobiRule build_gauss_jacobi_rule(const JacobiParams& params, int n_points);

/// Cached per (alpha, beta, n_points); the returned rule is shared and immutable.
std::shared_ptr<const GaussJacobiRule> gauss_jacobi_rule(const JacobiParams& params, int n_points);

/// Cached per (lambda, mu, n_points). n_points counts the underlying Jacobi
/// nodes; the rule has 2 n_points signed nodes.
std::shared_ptr<const GenGegenbauerRule> gen_gegenbauer_rule(const BasisParams& bp, int n_points);

/// Smallest Jacobi point count whose v_{lambda,mu} rule is exact to `degree`.
int gen_gegenbauer_points_for_exactness(int degree);

/// Largest relative residual over the moments ((1 + t)/2)^k and ((1 - t)/2)^k,
/// k <= exactness_degree, against their Beta closed forms.
double certify_exactness(const GaussJacobiRule& rule);

/// Largest residual over t^k, k <= exactness_degree: relative to the Beta closed
/// form for even k and relative to the rule's |t|^k sum for odd k (exact value 0).
double certify_exactness(const GenGegenbauerRule& rule);

/// Residual bound asserted by certification.
inline constexpr double kExactnessTolerance = 1e-12;

/// sum_i w_i f(t_i), Neumaier-compensated. A non-finite f(t_i) raises
/// EvaluationError carrying t_i.
template <class Rule, class F>
double integrate(const Rule& rule, F&& f) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double fx = f(rule.nodes[i]);
    if (!std::isfinite(fx)) {
      throw EvaluationError("integrand is not finite at node " + std::to_string(rule.nodes[i]),
                            rule.nodes[i]);
    }
    const double term = rule.weights[i] * fx;
    const double next = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - next) + term;
    } else {
      comp += (term - next) + sum;
    }
    sum = next;
  }
  return sum + comp;
}

struct ConvergedIntegral {
  double value = 0.0;
  int achieved_points = 0;  // Jacobi point count of the last rule used
};

inline constexpr int kConvergedStartPoints = 64;
inline constexpr int kConvergedMaxPoints = 1 << 16;
inline constexpr double kConvergedAbsoluteFloor = 1e-14;

/// Integrates f against v_{lambda,mu} with rules of N = 64, 128, ... points
/// until two successive values agree to rel_tol (absolute floor 1e-14).
/// Throws ConvergenceError with the last two values if max_points is passed.
ConvergedIntegral integrate_converged(const BasisParams& bp, const std::function<double(double)>& f,
                                      double rel_tol, int max_points = kConvergedMaxPoints);

}  // namespace ggexp
