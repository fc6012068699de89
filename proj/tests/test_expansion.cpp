#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <complex>
#include <cmath>
#include <random>
#include <vector>

#include "ggexp/errors.hpp"
#include "ggexp/expansion.hpp"
#include "ggexp/quadrature.hpp"
#include "ggexp/special_poly.hpp"

using namespace ggexp;

namespace {

std::vector<double> random_coeffs(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(degree + 1);
  for (double& x : c) x = u(rng);
  return c;
}

// Zeros by plain bisection on a uniform grid, for the L_p oracle below.
std::vector<double> bisect_zeros(const std::function<double(double)>& f, int grid) {
  std::vector<double> out;
  for (int k = 0; k < grid; ++k) {
    double a = -1.0 + 2.0 * k / grid;
    double b = -1.0 + 2.0 * (k + 1) / grid;
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) {
      out.push_back(a);
      continue;
    }
    if ((fa > 0) == (fb > 0)) continue;
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

// (int |f|^p v)^{1/p} by tanh-sinh on the pieces between zeros, 0 and +-1.
double lp_oracle(const BasisParams& bp, const std::function<double(double)>& f, double p) {
  std::vector<double> cuts = bisect_zeros(f, 4000);
  cuts.push_back(-1.0);
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    // xc is the signed distance to the nearer endpoint, which keeps 1 -+ t
    // accurate where the weight is singular.
    auto g = [&](double t, double xc) {
      const double one_minus = (b == 1.0 && xc > 0) ? xc : 1.0 - t;
      const double one_plus = (a == -1.0 && xc < 0) ? -xc : 1.0 + t;
      if (one_minus <= 0.0 || one_plus <= 0.0 || t == 0.0) return 0.0;
      return std::pow(std::abs(f(t)), p) * std::pow(std::abs(t), 2 * bp.mu()) *
             std::pow(one_minus * one_plus, bp.lambda() - 0.5);
    };
    total += ts.integrate(g, a, b, 1e-14);
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace

TEST_CASE("CoefficientVector") {
  const BasisParams bp(1.0, 0.5);
  const auto e = CoefficientVector::unit(bp, 3);
  CHECK(e.size() == 4);
  CHECK(e.degree() == 3);
  CHECK(e.coeffs == std::vector<double>{0, 0, 0, 1});
  CHECK_THROWS_AS(CoefficientVector(bp, {1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(CoefficientVector::unit(bp, -1), ArgumentError);
}

TEST_CASE("forward_transform examples") {
  const BasisParams bp(1.5, 0.5);
  SUBCASE("unit polynomial") {
    const auto cv = forward_transform(bp, TestFunction::polynomial(CoefficientVector::unit(bp, 3)), 8);
    REQUIRE(cv.size() == 9);
    for (int n = 0; n <= 8; ++n) CHECK(std::abs(cv.coeffs[n] - (n == 3 ? 1.0 : 0.0)) < 1e-11);
  }
  SUBCASE("constant") {
    const auto one = TestFunction::callable([](double) { return 1.0; }, 0);
    const auto cv = forward_transform(bp, one, 6);
    CHECK(cv.coeffs[0] == doctest::Approx(1.0 / orthonormal_coefficient(bp, 0)).epsilon(1e-13));
    for (int n = 1; n <= 6; ++n) CHECK(std::abs(cv.coeffs[n]) < 1e-13);
  }
  SUBCASE("general callable through adaptive quadrature") {
    const auto f = TestFunction::callable([](double t) { return std::exp(t); });
    const auto cv = forward_transform(bp, f, 10);
    // Oracle: a single rule far beyond the needed resolution.
    const auto rule = gen_gegenbauer_rule(bp, 200);
    const OrthonormalBasis basis(bp, 10);
    for (int n = 0; n <= 10; ++n) {
      const double ref = integrate(*rule, [&](double t) { return std::exp(t) * basis.eval(n, t); });
      CHECK(std::abs(cv.coeffs[n] - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
  }
  CHECK_THROWS_AS(forward_transform(bp, TestFunction::callable([](double t) { return t; }, 1), -1), ArgumentError);
}

TEST_CASE("round trip through partial sums") {
  std::mt19937_64 rng(7);
  const BasisParams params[] = {{-0.4, 0.0}, {0.5, 0.25}, {1.5, 0.5}, {3.0, 2.5}};
  for (int seed = 0; seed < 200; ++seed) {
    const BasisParams& bp = params[seed % 4];
    const int degree = 1 + seed % 40;
    const CoefficientVector cv(bp, random_coeffs(rng, degree));
    const auto p = TestFunction::polynomial(cv);
    const auto back = forward_transform(bp, p, degree);
    double sup = 0.0;
    double err = 0.0;
    for (int k = 0; k < 512; ++k) {
      const double t = -1.0 + 2.0 * k / 511.0;
      const double v = p(t);
      sup = std::max(sup, std::abs(v));
      err = std::max(err, std::abs(partial_sum_eval(back, t) - v));
    }
    CHECK(err < 1e-10 * (1.0 + sup));
  }
}

TEST_CASE("partial_sum_eval") {
  const BasisParams bp(0.75, 1.25);
  CHECK(partial_sum_eval(CoefficientVector(bp, {0, 0, 0}), 0.3) == 0.0);
  for (int n = 0; n < 10; ++n) {
    CHECK(partial_sum_eval(CoefficientVector::unit(bp, n), -0.7) ==
          doctest::Approx(orthonormal_gg_eval(bp, n, -0.7)).epsilon(1e-14));
  }
  std::mt19937_64 rng(3);
  const auto u = random_coeffs(rng, 15);
  const auto v = random_coeffs(rng, 15);
  std::vector<double> w(16);
  for (int n = 0; n <= 15; ++n) w[n] = 2.5 * u[n] - 0.75 * v[n];
  for (double t : {-1.0, -0.4, 0.0, 0.33, 1.0}) {
    const double lhs = partial_sum_eval(CoefficientVector(bp, w), t);
    const double rhs = 2.5 * partial_sum_eval(CoefficientVector(bp, u), t) -
                       0.75 * partial_sum_eval(CoefficientVector(bp, v), t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13).scale(1.0));
  }
  CHECK_THROWS_AS(partial_sum_eval(CoefficientVector(bp, {1.0}), 1.01), DomainError);
  CHECK_THROWS_AS(partial_sum_eval(CoefficientVector(bp, {}), -2.0), DomainError);
}

TEST_CASE("transform linearity") {
  const BasisParams bp(0.2, 0.6);
  std::mt19937_64 rng(11);
  const CoefficientVector f(bp, random_coeffs(rng, 18));
  const CoefficientVector g(bp, random_coeffs(rng, 18));
  const auto pf = TestFunction::polynomial(f);
  const auto pg = TestFunction::polynomial(g);
  const auto combo = TestFunction::callable([&](double t) { return 3.0 * pf(t) - 2.0 * pg(t); }, 18);
  const auto cf = forward_transform(bp, pf, 18);
  const auto cg = forward_transform(bp, pg, 18);
  const auto cc = forward_transform(bp, combo, 18);
  for (int n = 0; n <= 18; ++n) CHECK(std::abs(cc.coeffs[n] - (3.0 * cf.coeffs[n] - 2.0 * cg.coeffs[n])) < 1e-11);
}

TEST_CASE("lp_norm") {
  SUBCASE("orthonormal polynomials have unit L_2 norm") {
    for (const auto& bp : {BasisParams(-0.4, 0.0), BasisParams(1.5, 0.5), BasisParams(3.0, 2.5)}) {
      for (int n : {0, 1, 7, 30}) {
        CHECK(lp_norm(bp, TestFunction::polynomial(CoefficientVector::unit(bp, n)), 2.0) ==
              doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
  SUBCASE("constants") {
    for (const auto& bp : {BasisParams(0.5, 0.0), BasisParams(1.5, 0.5), BasisParams(-0.3, 1.2)}) {
      const auto c = TestFunction::callable([](double) { return -2.5; }, 0);
      const double mass = weight_total_mass(bp);
      for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, 6.0}) {
        CHECK(lp_norm(bp, c, p) == doctest::Approx(2.5 * std::pow(mass, 1.0 / p)).epsilon(1e-11));
      }
    }
  }
  SUBCASE("|t|^p closed forms") {
    const BasisParams flat(0.5, 0.0);
    const auto id = TestFunction::callable([](double t) { return t; }, 1);
    for (double p : {1.0, 1.25, 1.5, 3.0}) {
      CHECK(lp_norm(flat, id, p) == doctest::Approx(std::pow(2.0 / (p + 1.0), 1.0 / p)).epsilon(1e-11));
    }
    // C̃_1 = ã_1 t under (1.5, 0.5): int |t|^{p+1}(1 - t^2) = 2 (1/(p+2) - 1/(p+4)).
    const BasisParams bp(1.5, 0.5);
    const auto c1 = TestFunction::polynomial(CoefficientVector::unit(bp, 1));
    for (double p : {1.25, 1.5, 3.0}) {
      const double expected =
          orthonormal_coefficient(bp, 1) * std::pow(2.0 * (1.0 / (p + 2.0) - 1.0 / (p + 4.0)), 1.0 / p);
      CHECK(lp_norm(bp, c1, p) == doctest::Approx(expected).epsilon(1e-11));
    }
  }
  SUBCASE("random polynomials against tanh-sinh") {
    std::mt19937_64 rng(5);
    const BasisParams params[] = {{-0.4, 0.25}, {0.5, 0.0}, {1.5, 0.5}, {3.0, 1.0}};
    for (int trial = 0; trial < 8; ++trial) {
      const BasisParams& bp = params[trial % 4];
      const auto f = TestFunction::polynomial(CoefficientVector(bp, random_coeffs(rng, 6 + 3 * trial)));
      for (double p : {1.25, 1.5, 3.0}) {
        const double got = lp_norm(bp, f, p);
        const double ref = lp_oracle(bp, [&](double t) { return f(t); }, p);
        CHECK(got == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
  SUBCASE("p = infinity matches the sup-norm estimator") {
    const BasisParams bp(1.5, 0.5);
    CHECK(lp_norm(bp, TestFunction::polynomial(CoefficientVector::unit(bp, 7)), kInfinity) ==
          sup_norm_estimate(bp, 7));
  }
  SUBCASE("callables without a degree bound") {
    const BasisParams flat(0.5, 0.0);
    const auto e = TestFunction::callable([](double t) { return std::exp(t); });
    CHECK(lp_norm(flat, e, 2.0) == doctest::Approx(std::sqrt((std::exp(2.0) - std::exp(-2.0)) / 2.0)).epsilon(1e-11));
    CHECK(lp_norm(flat, e, kInfinity) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  }
  const BasisParams bp(1.0, 1.0);
  CHECK_THROWS_AS(lp_norm(bp, TestFunction::callable([](double) { return 1.0; }, 0), 0.5), DomainError);
}

TEST_CASE("parseval_check") {
  const BasisParams bp(1.5, 0.5);
  const auto r5 = parseval_check(bp, TestFunction::polynomial(CoefficientVector::unit(bp, 5)), 5);
  CHECK(r5.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r5.rhs == doctest::Approx(1.0).epsilon(1e-12));
  const auto r0 = parseval_check(bp, TestFunction::polynomial(CoefficientVector(bp, {0, 0, 0})), 2);
  CHECK(r0.lhs == 0.0);
  CHECK(r0.rhs == 0.0);

  std::mt19937_64 rng(13);
  for (int seed = 0; seed < 100; ++seed) {
    const BasisParams cell = seed % 2 ? BasisParams(-0.4, 2.5) : BasisParams(0.0, 0.0);
    const auto f = TestFunction::polynomial(CoefficientVector(cell, random_coeffs(rng, 20)));
    const auto r = parseval_check(cell, f, 20);
    CHECK(std::abs(r.lhs - r.rhs) < 1e-10 * r.rhs);
  }
  CHECK_THROWS_AS(parseval_check(bp, TestFunction::callable([](double t) { return t; }), 4), ArgumentError);
  CHECK_THROWS_AS(parseval_check(bp, TestFunction::polynomial(CoefficientVector::unit(bp, 6)), 4), ArgumentError);
}

TEST_CASE("sup-norm estimation") {
  SUBCASE("low degrees") {
    const BasisParams bp(1.5, 0.5);
    CHECK(sup_norm_estimate(bp, 0) == doctest::Approx(orthonormal_coefficient(bp, 0)).epsilon(1e-15));
    CHECK(sup_norm_estimate(bp, 1) == doctest::Approx(orthonormal_coefficient(bp, 1)).epsilon(1e-15));
  }
  SUBCASE("dense brute-force grid is a lower bound and close") {
    for (const auto& bp : {BasisParams(1.5, 0.5), BasisParams(-0.3, 0.25), BasisParams(0.5, 2.0)}) {
      for (int n : {2, 5, 12, 25}) {
        double brute = 0.0;
        for (int k = 0; k <= 200000; ++k) {
          brute = std::max(brute, std::abs(orthonormal_gg_eval(bp, n, -1.0 + 2.0 * k / 200000.0)));
        }
        const double est = sup_norm_estimate(bp, n);
        CHECK(est >= brute * (1.0 - 1e-15));
        CHECK(est <= brute * (1.0 + 1e-6));
      }
    }
  }
  SUBCASE("parity") {
    const BasisParams bp(0.8, 1.3);
    for (int n : {3, 8, 21, 40}) {
      const double left = sup_norm_estimate_on(bp, n, -1.0, 0.0);
      const double right = sup_norm_estimate_on(bp, n, 0.0, 1.0);
      CHECK(std::abs(left - right) <= 1e-10 * right);
    }
  }
  SUBCASE("ratio spread") {
    const BasisParams bp(1.5, 0.5);
    double lo = 1e300;
    double hi = 0.0;
    for (int n = 16; n <= 256; n += 16) {
      const double r = sup_norm_estimate(bp, n) / std::pow(n, bp.sigma());
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 4.0);
  }
  CHECK(sup_norm_grid_size(0) == 4096);
  CHECK(sup_norm_grid_size(200) == 32 * 201);
  CHECK_THROWS_AS(sup_abs_estimate([](double t) { return t; }, 1.0, 0.0, 100), ArgumentError);
}

TEST_CASE("polynomial roots") {
  SUBCASE("Legendre zeros") {
    const BasisParams legendre(0.5, 0.0);
    const auto zeros = real_zeros(CoefficientVector::unit(legendre, 5));
    const double expected[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
    REQUIRE(zeros.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(zeros[i] - expected[i]) < 1e-14);
  }
  SUBCASE("recurrence coefficients") {
    // Legendre: t P_n = ((n+1) P_{n+1} + n P_{n-1}) / (2n+1) gives b_n = n / sqrt(4n^2 - 1).
    const auto b = recurrence_offdiagonal(BasisParams(0.5, 0.0), 10);
    for (int n = 1; n <= 10; ++n) CHECK(b[n - 1] == doctest::Approx(n / std::sqrt(4.0 * n * n - 1.0)).epsilon(1e-14));
  }
  SUBCASE("roots of a product of linear factors") {
    // (t - 0.3)(t + 0.7)(t^2 + 0.01) expanded in the orthonormal basis.
    const BasisParams bp(1.2, 0.8);
    const auto g = TestFunction::callable([](double t) { return (t - 0.3) * (t + 0.7) * (t * t + 0.01); }, 4);
    const auto cv = forward_transform(bp, g, 4);
    auto roots = polynomial_roots(cv);
    REQUIRE(roots.size() == 4);
    std::sort(roots.begin(), roots.end(), [](auto x, auto y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
    CHECK(std::abs(roots[0] - std::complex<double>(-0.7, 0.0)) < 1e-12);
    CHECK(std::abs(roots[1] - std::complex<double>(0.0, -0.1)) < 1e-12);
    CHECK(std::abs(roots[2] - std::complex<double>(0.0, 0.1)) < 1e-12);
    CHECK(std::abs(roots[3] - std::complex<double>(0.3, 0.0)) < 1e-12);
    const auto zeros = real_zeros(cv);
    REQUIRE(zeros.size() == 2);
    CHECK(zeros[0] == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(zeros[1] == doctest::Approx(0.3).epsilon(1e-14));
  }
  SUBCASE("close pairs are separated") {
    // Zeros 4e-4 apart near t = 0.996. The slope there is about 5e-4, so a
    // 1e-15 coefficient error moves each zero by about 2e-12.
    const BasisParams bp(1.5, 0.5);
    const auto g = TestFunction::callable([](double t) { return (t - 0.9958) * (t - 0.9962) * (t + 0.2); }, 3);
    const auto zeros = real_zeros(forward_transform(bp, g, 3));
    REQUIRE(zeros.size() == 3);
    CHECK(std::abs(zeros[1] - 0.9958) < 1e-11);
    CHECK(std::abs(zeros[2] - 0.9962) < 1e-11);
  }
  CHECK(real_zeros(CoefficientVector(BasisParams(1.0, 1.0), {2.0})).empty());
  CHECK(polynomial_roots(CoefficientVector(BasisParams(1.0, 1.0), {2.0, 0.0, 0.0})).empty());
}

TEST_CASE("L_p norms of high-degree random polynomials") {
  // Dense random expansions have clustered zeros near the endpoints.
  const BasisParams bp(1.5, 0.5);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    std::normal_distribution<double> nd;
    std::vector<double> c(129);
    for (double& x : c) x = nd(rng);
    const auto f = TestFunction::polynomial(CoefficientVector(bp, c));
    const double got = lp_norm(bp, f, 1.5);
    const double ref = lp_oracle(bp, [&](double t) { return f(t); }, 1.5);
    CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  }
}
