#pragma once

// Jacobi, Gegenbauer and generalized Gegenbauer polynomials on [-1, 1].
//
// The generalized Gegenbauer family C_n^{(lambda,mu)} is orthogonal for the
// weight v(t) = |t|^{2 mu} (1 - t^2)^{lambda - 1/2}. Even degrees are Jacobi
// polynomials in 2t^2 - 1 with parameters (lambda - 1/2, mu - 1/2); odd degrees
// are t times Jacobi polynomials in 2t^2 - 1 with (lambda - 1/2, mu + 1/2).

#include <cstddef>
#include <span>
#include <vector>

namespace ggexp {

/// Parameters (alpha, beta) of the Jacobi weight (1 - t)^alpha (1 + t)^beta.
class JacobiParams {
 public:
  /// Throws DomainError unless alpha > -1 and beta > -1.
  JacobiParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;

 private:
  double alpha_;
  double beta_;
};

/// The pair (lambda, mu) selecting the weight v_{lambda,mu} and its basis.
class BasisParams {
 public:
  /// Throws DomainError unless lambda > -1/2 and mu >= 0.
  BasisParams(double lambda, double mu);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  /// max(lambda, mu), the growth exponent of the orthonormal sup-norms.
  double sigma() const noexcept { return lambda_ > mu_ ? lambda_ : mu_; }

  /// Jacobi parameters of the even-degree family.
  JacobiParams even_jacobi() const { return {lambda_ - 0.5, mu_ - 0.5}; }
  /// Jacobi parameters of the odd-degree family.
  JacobiParams odd_jacobi() const { return {lambda_ - 0.5, mu_ + 0.5}; }

  /// Throws DomainError naming `operation` when mu == 0.
  void require_positive_mu(const char* operation) const;

  friend bool operator==(const BasisParams&, const BasisParams&) = default;

 private:
  double lambda_;
  double mu_;
};

/// Rising factorial x (x + 1) ... (x + n - 1), evaluated as a plain product.
double pochhammer(double x, int n);

/// sum log Gamma(numerators) - sum log Gamma(denominators). Every argument must
/// be positive.
double log_gamma_ratio(std::span<const double> numerators,
                       std::span<const double> denominators);

/// Three-term recurrence coefficients for P_k^{(alpha,beta)}:
///   P_k = (a_k t + b_k) P_{k-1} - c_k P_{k-2},  k >= 1  (c_1 = 0).
class JacobiRecurrence {
 public:
  JacobiRecurrence(const JacobiParams& params, int max_degree);

  int max_degree() const noexcept { return static_cast<int>(a_.size()); }
  const JacobiParams& params() const noexcept { return params_; }

  /// Writes P_0(t) .. P_{out.size()-1}(t). out.size() must not exceed max_degree() + 1.
  void eval_all(double t, std::span<double> out) const;

  /// P_n(t) for n <= max_degree().
  double eval(int n, double t) const;

  /// Calls visit(k, P_k(t)) for k = 0 .. count-1 in order. Every evaluation
  /// path goes through here, so batched and single-degree values agree bitwise.
  template <class Visitor>
  void for_each(double t, std::size_t count, Visitor&& visit) const {
    if (count == 0) return;
    double prev = 1.0;
    visit(std::size_t{0}, prev);
    if (count == 1) return;
    double cur = a_[0] * t + b_[0];
    visit(std::size_t{1}, cur);
    for (std::size_t k = 2; k < count; ++k) {
      const double next = (a_[k - 1] * t + b_[k - 1]) * cur - c_[k - 1] * prev;
      prev = cur;
      cur = next;
      visit(k, cur);
    }
  }

 private:
  JacobiParams params_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
};

/// P_n^{(alpha,beta)}(t), |t| <= 1.
double jacobi_eval(const JacobiParams& params, int n, double t);

/// P_0(t) .. P_n(t) in one recurrence pass.
std::vector<double> jacobi_eval_all(const JacobiParams& params, int n, double t);

/// Integral of (P_n^{(alpha,beta)})^2 against the Jacobi weight.
double jacobi_squared_norm(const JacobiParams& params, int n);

/// Classical Gegenbauer polynomial C_n^lambda(t), lambda > -1/2.
double gegenbauer_eval(double lambda, int n, double t);

/// Leading Pochhammer ratio a_n that scales C_n^{(lambda,mu)}. May be negative
/// when lambda + mu < 0.
double gen_gegenbauer_coefficient(const BasisParams& bp, int n);

/// C_n^{(lambda,mu)}(t), |t| <= 1.
double gen_gegenbauer_eval(const BasisParams& bp, int n, double t);

/// Positive normalizer ã_n making C̃_n = ã_n (Jacobi factor) orthonormal in L_2(v).
double orthonormal_coefficient(const BasisParams& bp, int n);

/// Orthonormal basis C̃_0 .. C̃_N with normalizers and recurrences precomputed.
/// Immutable after construction; safe to share across threads.
class OrthonormalBasis {
 public:
  OrthonormalBasis(const BasisParams& bp, int max_degree);

  const BasisParams& params() const noexcept { return params_; }
  int max_degree() const noexcept { return max_degree_; }
  std::span<const double> normalizers() const noexcept { return normalizers_; }

  /// Writes C̃_0(t) .. C̃_{out.size()-1}(t); one recurrence pass per parity.
  void eval_all(double t, std::span<double> out) const;

  /// C̃_n(t), n <= max_degree(). Same arithmetic as eval_all.
  double eval(int n, double t) const;

  /// sum_n coeffs[n] C̃_n(t) for coeffs.size() <= max_degree() + 1, without
  /// materializing individual basis values.
  double eval_sum(std::span<const double> coeffs, double t) const;

 private:
  BasisParams params_;
  int max_degree_;
  std::vector<double> normalizers_;
  JacobiRecurrence even_;
  JacobiRecurrence odd_;
};

/// C̃_n^{(lambda,mu)}(t), |t| <= 1.
double orthonormal_gg_eval(const BasisParams& bp, int n, double t);

/// C̃_0(t) .. C̃_n(t).
std::vector<double> orthonormal_gg_eval_all(const BasisParams& bp, int n, double t);

}  // namespace ggexp
