#include "ggexp/special_poly.hpp"

#include <cmath>
#include <string>

#include "ggexp/errors.hpp"

namespace ggexp {

namespace {

void require_degree(int n) {
  if (n < 0) throw ArgumentError("polynomial degree must be non-negative, got " + std::to_string(n));
}

void require_unit_interval(double t) {
  if (!(std::abs(t) <= 1.0)) {
    throw DomainError("evaluation point must lie in [-1, 1], got " + std::to_string(t));
  }
}

// glibc's lgamma writes the global signgam; lgamma_r does not.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// prod_{k<n} (x + k) / (y + k), kept as a running ratio so it never overflows
// for the moderate ratios that occur here.
double pochhammer_ratio(double x, double y, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= (x + k) / (y + k);
  return r;
}

}  // namespace

JacobiParams::JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("Jacobi parameters must satisfy alpha > -1 and beta > -1, got (" +
                      std::to_string(alpha) + ", " + std::to_string(beta) + ")");
  }
}

BasisParams::BasisParams(double lambda, double mu) : lambda_(lambda), mu_(mu) {
  if (!(lambda > -0.5) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be > -1/2, got " + std::to_string(lambda));
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw DomainError("mu must be >= 0, got " + std::to_string(mu));
  }
}

void BasisParams::require_positive_mu(const char* operation) const {
  if (!(mu_ > 0.0)) {
    throw DomainError(std::string(operation) + " requires mu > 0, got mu = " + std::to_string(mu_));
  }
}

double pochhammer(double x, int n) {
  require_degree(n);
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x + k;
  return r;
}

double log_gamma_ratio(std::span<const double> numerators, std::span<const double> denominators) {
  double acc = 0.0;
  for (double x : numerators) {
    if (!(x > 0.0)) throw DomainError("log_gamma_ratio: non-positive argument " + std::to_string(x));
    acc += log_gamma(x);
  }
  for (double x : denominators) {
    if (!(x > 0.0)) throw DomainError("log_gamma_ratio: non-positive argument " + std::to_string(x));
    acc -= log_gamma(x);
  }
  return acc;
}

JacobiRecurrence::JacobiRecurrence(const JacobiParams& params, int max_degree)
    : params_(params) {
  require_degree(max_degree);
  const double al = params.alpha();
  const double be = params.beta();
  a_.resize(max_degree);
  b_.resize(max_degree);
  c_.resize(max_degree);
  if (max_degree >= 1) {
    a_[0] = 0.5 * (al + be + 2.0);
    b_[0] = 0.5 * (al - be);
    c_[0] = 0.0;
  }
  for (int k = 2; k <= max_degree; ++k) {
    const double s = 2.0 * k + al + be;
    const double denom = 2.0 * k * (k + al + be) * (s - 2.0);
    a_[k - 1] = (s - 1.0) * s * (s - 2.0) / denom;
    b_[k - 1] = (s - 1.0) * (al * al - be * be) / denom;
    c_[k - 1] = 2.0 * (k + al - 1.0) * (k + be - 1.0) * s / denom;
  }
}

void JacobiRecurrence::eval_all(double t, std::span<double> out) const {
  for_each(t, out.size(), [&](std::size_t k, double p) { out[k] = p; });
}

double JacobiRecurrence::eval(int n, double t) const {
  double last = 1.0;
  for_each(t, static_cast<std::size_t>(n) + 1, [&](std::size_t, double p) { last = p; });
  return last;
}

double jacobi_eval(const JacobiParams& params, int n, double t) {
  require_degree(n);
  require_unit_interval(t);
  return JacobiRecurrence(params, n).eval(n, t);
}

std::vector<double> jacobi_eval_all(const JacobiParams& params, int n, double t) {
  require_degree(n);
  require_unit_interval(t);
  std::vector<double> out(n + 1);
  JacobiRecurrence(params, n).eval_all(t, out);
  return out;
}

double jacobi_squared_norm(const JacobiParams& params, int n) {
  require_degree(n);
  const double al = params.alpha();
  const double be = params.beta();
  // (2n + a + b + 1) Gamma(n + a + b + 1) is folded into Gamma(a + b + 2) at n = 0,
  // where a + b + 1 may be <= 0.
  double log_value = (al + be + 1.0) * std::log(2.0);
  if (n == 0) {
    const double num[] = {al + 1.0, be + 1.0};
    const double den[] = {al + be + 2.0};
    log_value += log_gamma_ratio(num, den);
  } else {
    const double num[] = {n + al + 1.0, n + be + 1.0};
    const double den[] = {n + 1.0, n + al + be + 1.0};
    log_value += log_gamma_ratio(num, den) - std::log(2.0 * n + al + be + 1.0);
  }
  return std::exp(log_value);
}

double gegenbauer_eval(double lambda, int n, double t) {
  if (!(lambda > -0.5)) throw DomainError("Gegenbauer lambda must be > -1/2, got " + std::to_string(lambda));
  require_degree(n);
  require_unit_interval(t);
  const JacobiParams jp(lambda - 0.5, lambda - 0.5);
  return pochhammer_ratio(2.0 * lambda, lambda + 0.5, n) * JacobiRecurrence(jp, n).eval(n, t);
}

double gen_gegenbauer_coefficient(const BasisParams& bp, int n) {
  require_degree(n);
  const int m = n / 2 + (n % 2);  // a_{2m} uses m factors, a_{2m+1} uses m + 1
  return pochhammer_ratio(bp.lambda() + bp.mu(), bp.mu() + 0.5, m);
}

double gen_gegenbauer_eval(const BasisParams& bp, int n, double t) {
  require_degree(n);
  require_unit_interval(t);
  const int m = n / 2;
  const double x = 2.0 * t * t - 1.0;
  const double a = gen_gegenbauer_coefficient(bp, n);
  if (n % 2 == 0) return a * JacobiRecurrence(bp.even_jacobi(), m).eval(m, x);
  return a * t * JacobiRecurrence(bp.odd_jacobi(), m).eval(m, x);
}

double orthonormal_coefficient(const BasisParams& bp, int n) {
  require_degree(n);
  const double lam = bp.lambda();
  const double mu = bp.mu();
  const double lm = lam + mu;
  const int m = n / 2;
  double log_sq = 0.0;
  if (n % 2 == 0) {
    if (m == 0) {
      // (lambda + mu) Gamma(lambda + mu) = Gamma(lambda + mu + 1); lambda + mu may be <= 0.
      const double num[] = {lm + 1.0};
      const double den[] = {lam + 0.5, mu + 0.5};
      log_sq = log_gamma_ratio(num, den);
    } else {
      const double num[] = {m + 1.0, m + lm};
      const double den[] = {m + lam + 0.5, m + mu + 0.5};
      log_sq = std::log(2.0 * m + lm) + log_gamma_ratio(num, den);
    }
  } else {
    const double num[] = {m + 1.0, m + lm + 1.0};
    const double den[] = {m + lam + 0.5, m + mu + 1.5};
    log_sq = std::log(2.0 * m + lm + 1.0) + log_gamma_ratio(num, den);
  }
  return std::exp(0.5 * log_sq);
}

OrthonormalBasis::OrthonormalBasis(const BasisParams& bp, int max_degree)
    : params_(bp),
      max_degree_(max_degree),
      even_(bp.even_jacobi(), max_degree < 0 ? 0 : max_degree / 2),
      odd_(bp.odd_jacobi(), max_degree < 1 ? 0 : (max_degree - 1) / 2) {
  require_degree(max_degree);
  normalizers_.resize(max_degree + 1);
  for (int n = 0; n <= max_degree; ++n) normalizers_[n] = orthonormal_coefficient(bp, n);
}

void OrthonormalBasis::eval_all(double t, std::span<double> out) const {
  require_unit_interval(t);
  if (out.size() > static_cast<std::size_t>(max_degree_) + 1) {
    throw ArgumentError("OrthonormalBasis::eval_all: requested degrees exceed basis size");
  }
  const double x = 2.0 * t * t - 1.0;
  even_.for_each(x, (out.size() + 1) / 2,
                 [&](std::size_t m, double p) { out[2 * m] = normalizers_[2 * m] * p; });
  odd_.for_each(x, out.size() / 2,
                [&](std::size_t m, double p) { out[2 * m + 1] = normalizers_[2 * m + 1] * (t * p); });
}

double OrthonormalBasis::eval(int n, double t) const {
  require_degree(n);
  require_unit_interval(t);
  if (n > max_degree_) throw ArgumentError("OrthonormalBasis::eval: degree exceeds basis size");
  const double x = 2.0 * t * t - 1.0;
  const int m = n / 2;
  if (n % 2 == 0) return normalizers_[n] * even_.eval(m, x);
  return normalizers_[n] * (t * odd_.eval(m, x));
}

double OrthonormalBasis::eval_sum(std::span<const double> coeffs, double t) const {
  require_unit_interval(t);
  if (coeffs.size() > static_cast<std::size_t>(max_degree_) + 1) {
    throw ArgumentError("OrthonormalBasis::eval_sum: coefficient count exceeds basis size");
  }
  const std::size_t len = coeffs.size();
  const double x = 2.0 * t * t - 1.0;
  double even_sum = 0.0;
  even_.for_each(x, (len + 1) / 2, [&](std::size_t m, double p) {
    even_sum += coeffs[2 * m] * normalizers_[2 * m] * p;
  });
  double odd_sum = 0.0;
  odd_.for_each(x, len / 2, [&](std::size_t m, double p) {
    odd_sum += coeffs[2 * m + 1] * normalizers_[2 * m + 1] * p;
  });
  return even_sum + t * odd_sum;
}

double orthonormal_gg_eval(const BasisParams& bp, int n, double t) {
  require_degree(n);
  return OrthonormalBasis(bp, n).eval(n, t);
}

std::vector<double> orthonormal_gg_eval_all(const BasisParams& bp, int n, double t) {
  require_degree(n);
  std::vector<double> out(n + 1);
  OrthonormalBasis(bp, n).eval_all(t, out);
  return out;
}

}  // namespace ggexp
