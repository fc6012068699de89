#include "ggexp/quadrature.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

namespace ggexp {

namespace {

// Orthonormal Jacobi recurrence: x p_k = r_{k+1} p_{k+1} + d_k p_k + r_k p_{k-1}.
// Held in extended precision: near a singular endpoint the Christoffel weight
// varies fast enough that double-precision node polishing costs ~1e-11.
using Wide = long double;

struct RecurrenceTable {
  std::vector<Wide> diag;  // d_0 .. d_{N-1}
  std::vector<Wide> off;   // r_0 .. r_N, r_0 unused
};

RecurrenceTable jacobi_recurrence_table(const JacobiParams& p, int n) {
  const Wide al = p.alpha();
  const Wide be = p.beta();
  const Wide ab = al + be;
  RecurrenceTable table;
  table.diag.resize(n);
  table.off.assign(n + 1, 0.0);
  // k = 0 diagonal and k = 1 off-diagonal use reduced forms; the generic
  // expressions are 0/0 at a + b = 0 and a + b = -1 respectively.
  table.diag[0] = (be - al) / (ab + 2);
  for (int k = 1; k < n; ++k) {
    const Wide s = 2 * k + ab;
    table.diag[k] = (be * be - al * al) / (s * (s + 2));
  }
  if (n >= 1) {
    table.off[1] = std::sqrt(4 * (1 + al) * (1 + be) / ((2 + ab) * (2 + ab) * (3 + ab)));
  }
  for (int k = 2; k <= n; ++k) {
    const Wide s = 2 * k + ab;
    const Wide b = 4 * k * (k + al) * (k + be) * (k + ab) / (s * s * (s + 1) * (s - 1));
    table.off[k] = std::sqrt(b);
  }
  return table;
}

// Eigenvalues of the symmetric tridiagonal matrix (implicit QL, eigenvalues only).
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw ConvergenceError("tridiagonal QL iteration did not converge", d[l], e[l]);
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

// p_N(x) and p_N'(x) plus sum_{k<N} p_k(x)^2 from the orthonormal recurrence.
struct RecurrenceEval {
  Wide value;
  Wide derivative;
  Wide christoffel_sum;
};

RecurrenceEval eval_orthonormal(const RecurrenceTable& t, Wide p0, Wide x) {
  const int n = static_cast<int>(t.diag.size());
  Wide prev = 0;
  Wide cur = p0;
  Wide dprev = 0;
  Wide dcur = 0;
  Wide sum = 0;
  for (int k = 0; k < n; ++k) {
    sum += cur * cur;
    const Wide next = ((x - t.diag[k]) * cur - t.off[k] * prev) / t.off[k + 1];
    const Wide dnext = ((x - t.diag[k]) * dcur + cur - t.off[k] * dprev) / t.off[k + 1];
    prev = cur;
    cur = next;
    dprev = dcur;
    dcur = dnext;
  }
  return {cur, dcur, sum};
}

using RuleKey = std::tuple<double, double, int>;

template <class Rule>
class RuleCache {
 public:
  template <class Build>
  std::shared_ptr<const Rule> get(const RuleKey& key, Build&& build) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = rules_.find(key);
      if (it != rules_.end()) return it->second;
    }
    auto rule = std::make_shared<const Rule>(build());
    std::lock_guard<std::mutex> lock(mutex_);
    return rules_.emplace(key, std::move(rule)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<RuleKey, std::shared_ptr<const Rule>> rules_;
};

RuleCache<GaussJacobiRule>& jacobi_cache() {
  static RuleCache<GaussJacobiRule> cache;
  return cache;
}

RuleCache<GenGegenbauerRule>& gen_gegenbauer_cache() {
  static RuleCache<GenGegenbauerRule> cache;
  return cache;
}

double log_beta(double a, double b) {
  const double num[] = {a, b};
  const double den[] = {a + b};
  return log_gamma_ratio(num, den);
}

Wide log_gamma_wide(Wide x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgammal_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

Wide log_beta_wide(Wide a, Wide b) { return log_gamma_wide(a) + log_gamma_wide(b) - log_gamma_wide(a + b); }

}  // namespace

double jacobi_total_mass(const JacobiParams& params) {
  const double al = params.alpha();
  const double be = params.beta();
  return std::exp((al + be + 1.0) * std::log(2.0) + log_beta(al + 1.0, be + 1.0));
}

double weight_total_mass(const BasisParams& bp) {
  return std::exp(log_beta(bp.mu() + 0.5, bp.lambda() + 0.5));
}

double weight_value(const BasisParams& bp, double t) {
  if (!(std::abs(t) <= 1.0)) throw DomainError("weight evaluated outside [-1, 1]: " + std::to_string(t));
  const double radial = std::pow(std::abs(t), 2.0 * bp.mu());
  return radial * std::pow((1.0 - t) * (1.0 + t), bp.lambda() - 0.5);
}

GaussJacobiRule build_gauss_jacobi_rule(const JacobiParams& params, int n_points) {
  if (n_points < 1) {
    throw ArgumentError("Gauss-Jacobi rule needs at least one point, got " + std::to_string(n_points));
  }
  const RecurrenceTable table = jacobi_recurrence_table(params, n_points);
  const Wide p0 = 1 / std::sqrt(static_cast<Wide>(jacobi_total_mass(params)));

  std::vector<double> diag(table.diag.begin(), table.diag.end());
  std::vector<double> off(table.off.begin() + 1, table.off.begin() + n_points);
  std::vector<double> nodes = tridiagonal_eigenvalues(std::move(diag), std::move(off));

  std::vector<double> weights(n_points);
  for (int i = 0; i < n_points; ++i) {
    Wide x = nodes[i];
    for (int it = 0; it < 10; ++it) {
      const RecurrenceEval ev = eval_orthonormal(table, p0, x);
      if (ev.derivative == 0) break;
      const Wide step = ev.value / ev.derivative;
      const Wide next = x - step;
      if (!(std::abs(next) < 1)) break;
      x = next;
      if (std::abs(step) <= 4 * std::numeric_limits<Wide>::epsilon() * std::abs(x)) break;
    }
    nodes[i] = static_cast<double>(x);
    weights[i] = static_cast<double>(1 / eval_orthonormal(table, p0, x).christoffel_sum);
  }

  GaussJacobiRule rule{params, std::move(nodes), std::move(weights), 2 * n_points - 1};
#ifndef NDEBUG
  assert(certify_exactness(rule) <= kExactnessTolerance);
#endif
  return rule;
}

std::shared_ptr<const GaussJacobiRule> gauss_jacobi_rule(const JacobiParams& params, int n_points) {
  return jacobi_cache().get({params.alpha(), params.beta(), n_points},
                            [&] { return build_gauss_jacobi_rule(params, n_points); });
}

std::shared_ptr<const GenGegenbauerRule> gen_gegenbauer_rule(const BasisParams& bp, int n_points) {
  return gen_gegenbauer_cache().get({bp.lambda(), bp.mu(), n_points}, [&] {
    const auto base = gauss_jacobi_rule(bp.even_jacobi(), n_points);
    const double scale = 0.5 * std::exp2(-(bp.lambda() + bp.mu()));
    const std::size_t n = base->size();
    GenGegenbauerRule rule{bp, std::vector<double>(2 * n), std::vector<double>(2 * n),
                           4 * n_points - 1, n_points};
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::sqrt(0.5 * (1.0 + base->nodes[i]));
      const double w = scale * base->weights[i];
      rule.nodes[n + i] = t;
      rule.weights[n + i] = w;
      rule.nodes[n - 1 - i] = -t;
      rule.weights[n - 1 - i] = w;
    }
#ifndef NDEBUG
    assert(certify_exactness(rule) <= kExactnessTolerance);
#endif
    return rule;
  });
}

int gen_gegenbauer_points_for_exactness(int degree) {
  if (degree < 0) degree = 0;
  return std::max(1, (degree + 1 + 3) / 4);
}

// Certification runs in extended precision so the check itself does not
// contribute rounding comparable to the tolerance.
double certify_exactness(const GaussJacobiRule& rule) {
  const Wide al = rule.params.alpha();
  const Wide be = rule.params.beta();
  const Wide log_scale = (al + be + 1) * std::log(Wide{2});
  const std::size_t n = rule.size();
  std::vector<Wide> up(n, 1);
  std::vector<Wide> down(n, 1);
  double worst = 0.0;
  for (int k = 0; k <= rule.exactness_degree; ++k) {
    Wide q_up = 0;
    Wide q_down = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Wide x = rule.nodes[i];
      q_up += rule.weights[i] * up[i];
      q_down += rule.weights[i] * down[i];
      up[i] *= (1 + x) / 2;
      down[i] *= (1 - x) / 2;
    }
    const Wide m_up = std::exp(log_scale + log_beta_wide(al + 1, be + k + 1));
    const Wide m_down = std::exp(log_scale + log_beta_wide(al + k + 1, be + 1));
    worst = std::max({worst, static_cast<double>(std::abs(q_up - m_up) / m_up),
                      static_cast<double>(std::abs(q_down - m_down) / m_down)});
  }
  return worst;
}

double certify_exactness(const GenGegenbauerRule& rule) {
  const Wide lam = rule.params.lambda();
  const Wide mu = rule.params.mu();
  const std::size_t n = rule.size();
  std::vector<Wide> pw(n, 1);
  double worst = 0.0;
  for (int k = 0; k <= rule.exactness_degree; ++k) {
    Wide q = 0;
    Wide q_abs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      q += rule.weights[i] * pw[i];
      q_abs += rule.weights[i] * std::abs(pw[i]);
      pw[i] *= rule.nodes[i];
    }
    if (k % 2 == 0) {
      const Wide exact = std::exp(log_beta_wide(k / 2 + mu + Wide{0.5}, lam + Wide{0.5}));
      worst = std::max(worst, static_cast<double>(std::abs(q - exact) / exact));
    } else {
      worst = std::max(worst, static_cast<double>(std::abs(q) / q_abs));
    }
  }
  return worst;
}

ConvergedIntegral integrate_converged(const BasisParams& bp, const std::function<double(double)>& f,
                                      double rel_tol, int max_points) {
  if (!(rel_tol >= 1e-13)) {
    throw DomainError("integrate_converged: rel_tol must be >= 1e-13, got " + std::to_string(rel_tol));
  }
  int points = kConvergedStartPoints;
  double previous = integrate(*gen_gegenbauer_rule(bp, points), f);
  while (points < max_points) {
    points *= 2;
    const double value = integrate(*gen_gegenbauer_rule(bp, points), f);
    const double gap = std::abs(value - previous);
    if (gap <= rel_tol * std::abs(value) || gap <= kConvergedAbsoluteFloor) return {value, points};
    if (points >= max_points) {
      throw ConvergenceError("integrate_converged: no agreement within " + std::to_string(rel_tol) +
                                 " by " + std::to_string(points) + " points",
                             previous, value);
    }
    previous = value;
  }
  throw ConvergenceError("integrate_converged: max_points below the starting rule size", previous, previous);
}

}  // namespace ggexp
