#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "ggexp/errors.hpp"
#include "ggexp/quadrature.hpp"
#include "ggexp/special_poly.hpp"

using namespace ggexp;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Explicit finite sum
//   P_n^{(a,b)}(t) = sum_k binom(n+a, n-k) binom(n+b, k) ((t-1)/2)^k ((t+1)/2)^{n-k}
// in 50-digit arithmetic; generalized binomials as plain products.
double jacobi_series_oracle(double alpha, double beta, int n, double t) {
  auto binom = [](Big top, int k) {
    Big r = 1;
    for (int j = 0; j < k; ++j) r = r * (top - j) / (j + 1);
    return r;
  };
  const Big tm = (Big(t) - 1) / 2;
  const Big tp = (Big(t) + 1) / 2;
  Big sum = 0;
  for (int k = 0; k <= n; ++k) {
    sum += binom(Big(n) + alpha, n - k) * binom(Big(n) + beta, k) * pow(tm, k) * pow(tp, n - k);
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("pochhammer is the rising factorial") {
  CHECK(pochhammer(3.7, 0) == 1.0);
  CHECK(pochhammer(-2.5, 0) == 1.0);
  CHECK(pochhammer(2.0, 3) == 24.0);
  CHECK(pochhammer(0.5, 2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(pochhammer(-2.0, 3) == 0.0);
  CHECK_THROWS_AS(pochhammer(1.0, -1), ArgumentError);
}

TEST_CASE("log_gamma_ratio") {
  const double one[] = {1.0};
  const double three[] = {3.0};
  const double two[] = {2.0};
  const double a[] = {10.5};
  const double b[] = {9.5};
  CHECK(log_gamma_ratio(one, one) == 0.0);
  CHECK(log_gamma_ratio(three, two) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(log_gamma_ratio(a, b) == doctest::Approx(std::log(9.5)).epsilon(1e-14));

  // x Gamma(x) = Gamma(x + 1) across the working range.
  for (double x = 0.05; x < 500.0; x *= 1.37) {
    const double num[] = {x + 1.0};
    const double den[] = {x};
    CHECK(std::abs(log_gamma_ratio(num, den) - std::log(x)) <= 1e-12 * std::max(1.0, std::abs(std::log(x))));
  }

  const double zero[] = {0.0};
  const double neg[] = {-0.3};
  CHECK_THROWS_AS(log_gamma_ratio(zero, one), DomainError);
  CHECK_THROWS_AS(log_gamma_ratio(one, neg), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(JacobiParams(-1.0, 0.0), DomainError);
  CHECK_THROWS_AS(JacobiParams(0.0, -1.2), DomainError);
  CHECK_THROWS_AS(BasisParams(-0.5, 0.0), DomainError);
  CHECK_THROWS_AS(BasisParams(0.0, -0.1), DomainError);
  CHECK_NOTHROW(BasisParams(-0.49, 0.0));

  const BasisParams bp(1.0, 2.5);
  CHECK(bp.sigma() == 2.5);
  CHECK(bp.even_jacobi() == JacobiParams(0.5, 2.0));
  CHECK(bp.odd_jacobi() == JacobiParams(0.5, 3.0));
  CHECK_THROWS_AS(BasisParams(1.0, 0.0).require_positive_mu("connection_check"), DomainError);
}

TEST_CASE("jacobi_eval") {
  const JacobiParams legendre(0.0, 0.0);
  CHECK(jacobi_eval(JacobiParams(0.7, -0.4), 0, 0.3) == 1.0);
  // P_n(1) = (alpha + 1)_n / n!
  CHECK(jacobi_eval(legendre, 2, 1.0) == doctest::Approx(pochhammer(1.0, 2) / 2.0).epsilon(1e-15));
  const JacobiParams jp(1.3, -0.6);
  for (int n = 0; n <= 25; ++n) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    CHECK(jacobi_eval(jp, n, 1.0) == doctest::Approx(pochhammer(2.3, n) / fact).epsilon(1e-12));
  }

  CHECK_THROWS_AS(jacobi_eval(legendre, 3, 1.0 + 1e-12), DomainError);
  CHECK_THROWS_AS(jacobi_eval(legendre, 3, std::nan("")), DomainError);
  CHECK_THROWS_AS(jacobi_eval(legendre, -1, 0.0), ArgumentError);

  SUBCASE("P_2 and P_3 are orthogonal under the Jacobi weight") {
    const JacobiParams p(0.25, 1.5);
    const auto rule = gauss_jacobi_rule(p, 8);
    const double ip = integrate(*rule, [&](double t) { return jacobi_eval(p, 2, t) * jacobi_eval(p, 3, t); });
    CHECK(std::abs(ip) < 1e-14);
  }
}

TEST_CASE("jacobi_eval matches the explicit series in extended precision") {
  const double params[][2] = {{0.0, 0.0}, {-0.5, -0.5}, {1.0, 0.5}, {-0.9, 2.5}, {3.0, -0.25}, {2.5, 2.5}};
  const double ts[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (const auto& ab : params) {
    const JacobiParams jp(ab[0], ab[1]);
    for (int n = 0; n <= 30; ++n) {
      for (double t : ts) {
        const double expected = jacobi_series_oracle(ab[0], ab[1], n, t);
        const double got = jacobi_eval(jp, n, t);
        CHECK(std::abs(got - expected) <= 1e-11 * std::max(1.0, std::abs(expected)));
      }
    }
  }
}

TEST_CASE("jacobi_squared_norm") {
  CHECK(jacobi_squared_norm(JacobiParams(0.0, 0.0), 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(jacobi_squared_norm(JacobiParams(0.0, 0.0), 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // alpha + beta = -1 at n = 0: the Gamma(alpha + beta + 1) factor must be folded.
  const JacobiParams cheb(-0.5, -0.5);
  CHECK(jacobi_squared_norm(cheb, 0) == doctest::Approx(M_PI).epsilon(1e-14));

  const JacobiParams jp(0.3, 1.7);
  const auto rule = gauss_jacobi_rule(jp, 40);
  const double brute = integrate(*rule, [&](double t) {
    const double v = jacobi_eval(jp, 5, t);
    return v * v;
  });
  CHECK(jacobi_squared_norm(jp, 5) == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("gegenbauer_eval") {
  CHECK(gegenbauer_eval(0.7, 0, -0.2) == 1.0);
  CHECK(gegenbauer_eval(1.0, 1, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  // C_2^1 is the Chebyshev U_2 = 4t^2 - 1.
  CHECK(gegenbauer_eval(1.0, 2, 0.3) == doctest::Approx(4 * 0.09 - 1).epsilon(1e-14));
  CHECK_THROWS_AS(gegenbauer_eval(-0.5, 2, 0.3), DomainError);

  for (double lam : {-0.3, 0.2, 0.5, 1.0, 2.75}) {
    const BasisParams bp(lam, 0.0);
    for (int n = 0; n <= 20; ++n) {
      for (int i = 0; i <= 40; ++i) {
        const double t = -1.0 + i / 20.0;
        const double direct = gegenbauer_eval(lam, n, t);
        const double general = gen_gegenbauer_eval(bp, n, t);
        CHECK(std::abs(direct - general) <= 1e-11 * std::max(1.0, std::abs(direct)));
      }
    }
  }
}

TEST_CASE("gen_gegenbauer_eval low degrees") {
  const BasisParams bp(1.25, 0.75);
  CHECK(gen_gegenbauer_eval(bp, 0, 0.4) == 1.0);
  for (int i = 0; i <= 50; ++i) {
    const double t = -1.0 + i / 25.0;
    const double expected = (bp.lambda() + bp.mu()) / (bp.mu() + 0.5) * t;
    CHECK(std::abs(gen_gegenbauer_eval(bp, 1, t) - expected) <= 4e-16 * std::abs(expected) + 1e-300);
  }
  // lambda + mu < 0 flips the sign of a_n.
  const BasisParams neg(-0.4, 0.25);
  CHECK(gen_gegenbauer_coefficient(neg, 1) < 0.0);
  CHECK(orthonormal_coefficient(neg, 1) > 0.0);
}

TEST_CASE("orthonormal_coefficient") {
  const double lams[] = {-0.4, 0.0, 0.5, 1.5, 3.0};
  const double mus[] = {0.0, 0.25, 0.5, 1.0, 2.5};
  for (double lam : lams) {
    for (double mu : mus) {
      const BasisParams bp(lam, mu);
      // ã_0^2 * mass(v) = 1 with mass = B(mu + 1/2, lambda + 1/2).
      const double expected = std::sqrt(std::tgamma(lam + mu + 1.0) / (std::tgamma(lam + 0.5) * std::tgamma(mu + 0.5)));
      CHECK(orthonormal_coefficient(bp, 0) == doctest::Approx(expected).epsilon(1e-13));
      CHECK(orthonormal_coefficient(bp, 0) * orthonormal_coefficient(bp, 0) * weight_total_mass(bp) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  const BasisParams legendre(0.5, 0.0);
  for (int n = 0; n <= 10; ++n) {
    CHECK(orthonormal_coefficient(legendre, n) == doctest::Approx(std::sqrt((2.0 * n + 1.0) / 2.0)).epsilon(1e-13));
  }
  // Large degrees stay finite.
  CHECK(std::isfinite(orthonormal_coefficient(BasisParams(3.0, 2.5), 400)));
}

TEST_CASE("orthonormal_gg_eval") {
  const BasisParams bp(1.5, 0.5);
  for (double t : {-1.0, -0.3, 0.0, 0.8}) {
    CHECK(orthonormal_gg_eval(bp, 0, t) == orthonormal_coefficient(bp, 0));
  }
  CHECK(orthonormal_gg_eval(bp, 1, 0.0) == 0.0);

  for (int n = 0; n <= 15; ++n) {
    const double expected = orthonormal_coefficient(bp, n) / gen_gegenbauer_coefficient(bp, n);
    for (double t : {-0.95, -0.4, 0.2, 0.77, 1.0}) {
      const double raw = gen_gegenbauer_eval(bp, n, t);
      if (std::abs(raw) < 1e-8) continue;
      CHECK(orthonormal_gg_eval(bp, n, t) / raw == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(orthonormal_gg_eval(bp, 2, -1.5), DomainError);
}

TEST_CASE("parity holds exactly") {
  const double lams[] = {-0.4, 0.5, 3.0};
  const double mus[] = {0.0, 0.25, 2.5};
  for (double lam : lams) {
    for (double mu : mus) {
      const OrthonormalBasis basis(BasisParams(lam, mu), 50);
      std::vector<double> pos(51), neg(51);
      for (int i = 0; i < 1000; ++i) {
        const double t = -1.0 + 2.0 * i / 999.0;
        basis.eval_all(t, pos);
        basis.eval_all(-t, neg);
        for (int n = 0; n <= 50; ++n) {
          const double sign = n % 2 == 0 ? 1.0 : -1.0;
          REQUIRE(neg[n] == sign * pos[n]);
        }
      }
    }
  }
}

TEST_CASE("batched and single-degree orthonormal evaluation agree bitwise") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam_dist(-0.45, 4.0), mu_dist(0.0, 3.0), t_dist(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const BasisParams bp(lam_dist(rng), mu_dist(rng));
    const int nmax = 1 + static_cast<int>(rng() % 80);
    const double t = t_dist(rng);
    const auto all = orthonormal_gg_eval_all(bp, nmax, t);
    for (int n = 0; n <= nmax; ++n) REQUIRE(all[n] == orthonormal_gg_eval(bp, n, t));
  }
}

TEST_CASE("OrthonormalBasis::eval_sum equals the explicit sum") {
  const BasisParams bp(0.0, 1.0);
  const OrthonormalBasis basis(bp, 12);
  std::vector<double> c(13);
  for (int n = 0; n <= 12; ++n) c[n] = std::cos(1.0 + n);
  std::vector<double> vals(13);
  for (double t : {-1.0, -0.31, 0.0, 0.5, 1.0}) {
    basis.eval_all(t, vals);
    double expected = 0.0;
    for (int n = 0; n <= 12; ++n) expected += c[n] * vals[n];
    CHECK(basis.eval_sum(c, t) == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(basis.eval_sum(std::vector<double>{}, 0.3) == 0.0);
  CHECK_THROWS_AS(basis.eval_sum(std::vector<double>(14, 1.0), 0.1), ArgumentError);
}
