#include "ggexp/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <lapacke.h>
#include <numbers>
#include <string>

#include "ggexp/errors.hpp"
#include "ggexp/parallel.hpp"
#include "ggexp/quadrature.hpp"

namespace ggexp {

namespace {

constexpr double kGoldenWidth = 1e-12;
constexpr int kPieceStartPoints = 8;
constexpr int kPieceMaxPoints = 4096;
constexpr double kOriginSnap = 1e-13;
// Complex roots this close to the real axis still get a breakpoint.
constexpr double kNearReal = 0.1;
// Roots this close to +-1 count as zeros at the endpoint.
constexpr double kEndpointSnap = 1e-10;
// Trailing coefficients below this fraction of the largest are dropped
// before the root solve.
constexpr int kCellSamples = 8;
constexpr double kTrailingDrop = 1e-14;

double chebyshev_point(double a, double b, int k, int count) {
  // Lobatto points, ordered from a to b.
  const double c = -std::cos(std::numbers::pi * k / (count - 1));
  if (k == 0) return a;
  if (k == count - 1) return b;
  return 0.5 * (a + b) + 0.5 * (b - a) * c;
}

double golden_max(const std::function<double(double)>& g, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1);
  double f2 = g(x2);
  while (hi - lo > kGoldenWidth) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    }
  }
  return std::max(f1, f2);
}

double illinois(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi) {
  int side = 0;
  double c = lo;
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo))) break;
    c = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
    const double fc = f(c);
    if (fc == 0.0) return c;
    if ((fc > 0.0) == (fhi > 0.0)) {
      hi = c;
      fhi = fc;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = c;
      flo = fc;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

bool is_even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0; }

// Endpoint of a piece in the zero-split L_p integration.
struct Breakpoint {
  double t;
  bool function_zero;
};

// Integrand |f|^p v on [a, b], with the endpoint factors that vanish or blow up
// moved into the Gauss-Jacobi weight of the piece.
class PieceIntegrand {
 public:
  PieceIntegrand(const BasisParams& bp, const std::function<double(double)>& f, double p,
                 const Breakpoint& left, const Breakpoint& right)
      : bp_(bp), f_(f), p_(p), a_(left.t), b_(right.t), zero_a_(left.function_zero), zero_b_(right.function_zero) {
    const double wexp = bp.lambda() - 0.5;
    left_exp_ = (a_ == -1.0 ? wexp : 0.0) + (a_ == 0.0 ? 2.0 * bp.mu() : 0.0) + (zero_a_ ? p : 0.0);
    right_exp_ = (b_ == 1.0 ? wexp : 0.0) + (b_ == 0.0 ? 2.0 * bp.mu() : 0.0) + (zero_b_ ? p : 0.0);
  }

  // Jacobi (alpha, beta) = (right exponent, left exponent) on the reference interval.
  JacobiParams jacobi() const { return {right_exp_, left_exp_}; }

  double operator()(double x) const {
    const double h = 0.5 * (b_ - a_);
    const double da = h * (1.0 + x);
    const double db = h * (1.0 - x);
    const double t = x <= 0.0 ? a_ + da : b_ - db;
    double value = 1.0;
    if (a_ != 0.0 && b_ != 0.0) value *= std::pow(std::abs(t), 2.0 * bp_.mu());
    if (b_ != 1.0) value *= std::pow(1.0 - t, bp_.lambda() - 0.5);
    if (a_ != -1.0) value *= std::pow(1.0 + t, bp_.lambda() - 0.5);
    double divisor = 1.0;
    if (zero_a_) divisor *= da;
    if (zero_b_) divisor *= db;
    value *= std::pow(std::abs(f_(t)) / divisor, p_);
    return value;
  }

  double scale() const { return std::pow(0.5 * (b_ - a_), 1.0 + left_exp_ + right_exp_); }

 private:
  const BasisParams& bp_;
  const std::function<double(double)>& f_;
  double p_;
  double a_;
  double b_;
  bool zero_a_;
  bool zero_b_;
  double left_exp_ = 0.0;
  double right_exp_ = 0.0;
};

// Doubles the rule on one piece until successive values agree within rel_tol
// of the larger of the piece itself and `floor`. The floor lets tiny pieces
// next to a zero stop once they are negligible for the whole integral.
double integrate_piece(const PieceIntegrand& piece, double first, double rel_tol, double floor) {
  const JacobiParams jp = piece.jacobi();
  const double scale = piece.scale();
  int n = kPieceStartPoints;
  double previous = scale * first;
  while (true) {
    n *= 2;
    const double value = scale * integrate(*gauss_jacobi_rule(jp, n), piece);
    if (std::abs(value - previous) <= rel_tol * std::max(std::abs(value), floor)) return value;
    if (n >= kPieceMaxPoints) throw ConvergenceError("L_p piece integration did not converge", previous, value);
    previous = value;
  }
}

// Breakpoints for the L_p split: every sign change of f, plus the real parts
// of near-real complex roots where |f| dips sharply without vanishing.
std::vector<Breakpoint> split_points(const CoefficientVector& cv, const std::function<double(double)>& f) {
  std::vector<double> xs;
  bool left_zero = false;
  bool right_zero = false;
  for (const auto& z : polynomial_roots(cv)) {
    if (std::abs(z.imag()) > kNearReal) continue;
    if (std::abs(z.imag()) <= kEndpointSnap) {
      if (std::abs(z.real() + 1.0) <= kEndpointSnap) left_zero = true;
      if (std::abs(z.real() - 1.0) <= kEndpointSnap) right_zero = true;
    }
    if (z.real() > -1.0 && z.real() < 1.0) xs.push_back(z.real());
  }
  std::sort(xs.begin(), xs.end());

  std::vector<Breakpoint> points{{-1.0, left_zero}, {1.0, right_zero}};
  bool origin_zero = false;
  auto add_zero = [&](double z) {
    if (std::abs(z) <= kOriginSnap) {
      origin_zero = true;
    } else if (z > -1.0 && z < 1.0) {
      points.push_back({z, true});
    }
  };
  // Each candidate owns the cell between the midpoints to its neighbors. The
  // cell is sampled at the candidate and kCellSamples interior points; every
  // sign change is refined to a zero, otherwise the candidate is a plain split.
  double lo = -1.0;
  double flo = f(lo);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double hi = k + 1 < xs.size() ? 0.5 * (xs[k] + xs[k + 1]) : 1.0;
    std::vector<double> ts;
    for (int j = 1; j < kCellSamples; ++j) ts.push_back(lo + (hi - lo) * j / kCellSamples);
    ts.push_back(xs[k]);
    ts.push_back(hi);
    std::sort(ts.begin(), ts.end());
    bool found = false;
    double a = lo;
    double fa = flo;
    for (double b : ts) {
      if (!(b > a)) continue;
      const double fb = f(b);
      if (fb == 0.0) {
        add_zero(b);
        found = true;
      } else if (fa != 0.0 && (fa > 0.0) != (fb > 0.0)) {
        add_zero(illinois(f, a, b, fa, fb));
        found = true;
      }
      a = b;
      fa = fb;
    }
    if (!found) points.push_back({xs[k], false});
    lo = hi;
    flo = fa;
  }
  points.push_back({0.0, origin_zero});
  std::sort(points.begin(), points.end(), [](const Breakpoint& x, const Breakpoint& y) {
    return x.t < y.t || (x.t == y.t && x.function_zero > y.function_zero);
  });
  // Keep the zero flag when a zero and a plain split coincide.
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Breakpoint& x, const Breakpoint& y) { return x.t == y.t; }),
               points.end());
  return points;
}

double split_lp_integral(const BasisParams& bp, const std::function<double(double)>& f,
                         const std::vector<Breakpoint>& points, double p, double rel_tol) {
  std::vector<PieceIntegrand> pieces;
  std::vector<double> first;
  double rough = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    pieces.emplace_back(bp, f, p, points[i], points[i + 1]);
    first.push_back(integrate(*gauss_jacobi_rule(pieces.back().jacobi(), kPieceStartPoints), pieces.back()));
    rough += pieces.back().scale() * first.back();
  }
  const double floor = rough / static_cast<double>(pieces.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) total += integrate_piece(pieces[i], first[i], rel_tol, floor);
  return total;
}

}  // namespace

CoefficientVector::CoefficientVector(const BasisParams& bp, std::vector<double> values)
    : params(bp), coeffs(std::move(values)) {
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (!std::isfinite(coeffs[n])) throw DomainError("coefficient " + std::to_string(n) + " is not finite");
  }
}

CoefficientVector CoefficientVector::unit(const BasisParams& bp, int n) {
  if (n < 0) throw ArgumentError("unit coefficient vector needs n >= 0");
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  return {bp, std::move(c)};
}

TestFunction TestFunction::polynomial(CoefficientVector cv) {
  TestFunction f;
  f.kind_ = Kind::kPolynomial;
  f.degree_ = std::max(0, cv.degree());
  f.basis_ = std::make_shared<const OrthonormalBasis>(cv.params, std::max(0, cv.degree()));
  f.coeffs_ = std::move(cv);
  return f;
}

TestFunction TestFunction::callable(std::function<double(double)> fn, std::optional<int> degree_bound) {
  if (!fn) throw ArgumentError("TestFunction::callable needs a target");
  if (degree_bound && *degree_bound < 0) throw ArgumentError("degree bound must be non-negative");
  TestFunction f;
  f.kind_ = Kind::kCallable;
  f.fn_ = std::move(fn);
  f.degree_ = degree_bound;
  return f;
}

double TestFunction::operator()(double t) const {
  if (kind_ == Kind::kPolynomial) return basis_->eval_sum(coeffs_->coeffs, t);
  return fn_(t);
}

CoefficientVector forward_transform(const BasisParams& bp, const TestFunction& f, int degree) {
  if (degree < 0) throw ArgumentError("forward_transform: degree must be non-negative");
  const OrthonormalBasis basis(bp, degree);
  std::vector<double> out(degree + 1, 0.0);

  if (const auto bound = f.degree_bound()) {
    const int exact = 2 * std::max(degree, *bound) + 1;
    const auto rule = gen_gegenbauer_rule(bp, gen_gegenbauer_points_for_exactness(exact));
    std::vector<double> fvals(rule->size());
    for (std::size_t i = 0; i < rule->size(); ++i) {
      fvals[i] = f(rule->nodes[i]);
      if (!std::isfinite(fvals[i])) {
        throw EvaluationError("integrand is not finite at node " + std::to_string(rule->nodes[i]), rule->nodes[i]);
      }
    }
    std::vector<double> vals(degree + 1);
    // Node-major accumulation with a fixed order keeps the result deterministic.
    for (std::size_t i = 0; i < rule->size(); ++i) {
      basis.eval_all(rule->nodes[i], vals);
      const double wf = rule->weights[i] * fvals[i];
      for (int n = 0; n <= degree; ++n) out[n] += wf * vals[n];
    }
    return {bp, std::move(out)};
  }

  parallel_for(out.size(), [&](std::size_t n) {
    const int deg = static_cast<int>(n);
    out[n] = integrate_converged(bp, [&](double t) { return f(t) * basis.eval(deg, t); }, kTransformRelTol).value;
  });
  return {bp, std::move(out)};
}

double partial_sum_eval(const CoefficientVector& cv, double t) {
  if (cv.coeffs.empty()) {
    if (!(std::abs(t) <= 1.0)) throw DomainError("evaluation point must lie in [-1, 1]");
    return 0.0;
  }
  const OrthonormalBasis basis(cv.params, cv.degree());
  return basis.eval_sum(cv.coeffs, t);
}

int sup_norm_grid_size(int n) { return std::max(4096, 32 * (n + 1)); }

double sup_abs_estimate(const std::function<double(double)>& f, double a, double b, int grid_size) {
  if (!(a < b)) throw ArgumentError("sup_abs_estimate: empty interval");
  if (grid_size < 3) throw ArgumentError("sup_abs_estimate: grid needs at least 3 points");
  std::vector<double> ts(grid_size);
  std::vector<double> vals(grid_size);
  for (int k = 0; k < grid_size; ++k) {
    ts[k] = chebyshev_point(a, b, k, grid_size);
    vals[k] = std::abs(f(ts[k]));
  }
  auto g = [&](double t) { return std::abs(f(t)); };
  double best = *std::max_element(vals.begin(), vals.end());
  for (int k = 0; k < grid_size; ++k) {
    const bool left_ok = k == 0 || vals[k] >= vals[k - 1];
    const bool right_ok = k == grid_size - 1 || vals[k] >= vals[k + 1];
    if (!left_ok || !right_ok) continue;
    const double lo = ts[k == 0 ? 0 : k - 1];
    const double hi = ts[k == grid_size - 1 ? k : k + 1];
    best = std::max(best, golden_max(g, lo, hi));
  }
  return best;
}

double sup_norm_estimate_on(const BasisParams& bp, int n, double a, double b) {
  if (!(a >= -1.0 && b <= 1.0)) throw DomainError("sup_norm_estimate_on: interval must lie in [-1, 1]");
  const TestFunction f = TestFunction::polynomial(CoefficientVector::unit(bp, n));
  return sup_abs_estimate([&](double t) { return f(t); }, a, b, sup_norm_grid_size(n));
}

double sup_norm_estimate(const BasisParams& bp, int n) { return sup_norm_estimate_on(bp, n, -1.0, 1.0); }

std::vector<double> recurrence_offdiagonal(const BasisParams& bp, int n) {
  if (n < 0) throw ArgumentError("recurrence_offdiagonal: n must be non-negative");
  std::vector<double> b(n, 0.0);
  if (n == 0) return b;
  const auto rule = gen_gegenbauer_rule(bp, gen_gegenbauer_points_for_exactness(2 * n));
  const OrthonormalBasis basis(bp, n);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < rule->size(); ++i) {
    const double t = rule->nodes[i];
    basis.eval_all(t, vals);
    const double wt = rule->weights[i] * t;
    for (int k = 1; k <= n; ++k) b[k - 1] += wt * vals[k] * vals[k - 1];
  }
  return b;
}

std::vector<std::complex<double>> polynomial_roots(const CoefficientVector& cv) {
  double largest = 0.0;
  for (double c : cv.coeffs) largest = std::max(largest, std::abs(c));
  int degree = cv.degree();
  while (degree > 0 && std::abs(cv.coeffs[degree]) <= kTrailingDrop * largest) --degree;
  if (degree <= 0) return {};

  const std::vector<double> b = recurrence_offdiagonal(cv.params, degree);
  const int n = degree;
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(r) * n + c]; };
  for (int k = 0; k + 1 < n; ++k) {
    at(k, k + 1) = b[k];
    at(k + 1, k) = b[k];
  }
  const double scale = b[n - 1] / cv.coeffs[n];
  for (int j = 0; j < n; ++j) at(n - 1, j) -= scale * cv.coeffs[j];

  std::vector<double> wr(n);
  std::vector<double> wi(n);
  const lapack_int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, m.data(), n, wr.data(), wi.data(), nullptr, n,
                                        nullptr, n);
  if (info != 0) {
    throw ConvergenceError("eigenvalue iteration for polynomial roots failed (info " + std::to_string(info) + ")",
                           std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  }
  std::vector<std::complex<double>> roots(n);
  for (int k = 0; k < n; ++k) roots[k] = {wr[k], wi[k]};
  return roots;
}

std::vector<double> real_zeros(const CoefficientVector& cv) {
  const TestFunction f = TestFunction::polynomial(cv);
  std::vector<double> out;
  for (const Breakpoint& b : split_points(cv, [&](double t) { return f(t); })) {
    if (b.function_zero) out.push_back(b.t);
  }
  return out;
}

double lp_norm(const BasisParams& bp, const TestFunction& f, double p, const LpOptions& options) {
  if (std::isinf(p) && p > 0) {
    const auto bound = f.degree_bound();
    const int grid = bound ? sup_norm_grid_size(*bound) : options.sup_grid;
    return sup_abs_estimate([&](double t) { return f(t); }, -1.0, 1.0, grid);
  }
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1 or infinite, got " + std::to_string(p));

  const auto bound = f.degree_bound();
  auto integrand = [&](double t) { return std::pow(std::abs(f(t)), p); };
  double integral = 0.0;
  if (bound && is_even_integer(p)) {
    const int exact = static_cast<int>(p) * *bound;
    const auto rule = gen_gegenbauer_rule(bp, gen_gegenbauer_points_for_exactness(exact));
    integral = integrate(*rule, integrand);
  } else if (bound) {
    const std::function<double(double)> g = [&](double t) { return f(t); };
    const CoefficientVector cv = f.coefficients() ? *f.coefficients() : forward_transform(bp, f, *bound);
    integral = split_lp_integral(bp, g, split_points(cv, g), p, options.rel_tol);
  } else {
    integral = integrate_converged(bp, integrand, options.rel_tol).value;
  }
  return std::pow(integral, 1.0 / p);
}

ParsevalResult parseval_check(const BasisParams& bp, const TestFunction& f, int degree) {
  const auto bound = f.degree_bound();
  if (!bound || *bound > degree) {
    throw ArgumentError("parseval_check: f must be a polynomial of degree <= " + std::to_string(degree));
  }
  ParsevalResult result;
  result.lhs = lp_norm(bp, f, 2.0);
  const CoefficientVector cv = forward_transform(bp, f, degree);
  double sum = 0.0;
  for (double c : cv.coeffs) sum += c * c;
  result.rhs = std::sqrt(sum);
  return result;
}

}  // namespace ggexp
