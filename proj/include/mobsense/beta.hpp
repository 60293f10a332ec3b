#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace mobsense {

/// Gamma function on (0, 50]. Backed by the standard library.
inline double gamma_fn(double x) {
  if (!(x > 0.0) || x > 50.0) throw std::invalid_argument("gamma_fn: x must lie in (0, 50]");
  return std::tgamma(x);
}

/// log Gamma for x > 0; reentrant (does not touch signgam).
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_gamma: x must be > 0");
  return boost::math::lgamma(x);
}

inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("log_binomial: k > n");
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0);
}

/// Beta distribution with positive integer parameters.
struct BetaParams {
  std::uint64_t c = 1;
  std::uint64_t d = 1;

  void validate() const {
    if (c < 1 || d < 1) throw std::invalid_argument("BetaParams: c and d must be >= 1");
  }
};

/// log f_{c,d}(t) with f = c * C(c+d-1, c) * t^(c-1) * (1-t)^(d-1); -inf where f vanishes.
inline double log_beta_pdf(const BetaParams& p, double t) {
  p.validate();
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("beta_pdf: t must lie in [0,1]");
  const double cd = static_cast<double>(p.c);
  const double dd = static_cast<double>(p.d);
  double v = std::log(cd) + log_binomial(p.c + p.d - 1, p.c);
  if (p.c > 1) {
    if (t == 0.0) return -INFINITY;
    v += (cd - 1.0) * std::log(t);
  }
  if (p.d > 1) {
    if (t == 1.0) return -INFINITY;
    v += (dd - 1.0) * std::log1p(-t);
  }
  return v;
}

inline double beta_pdf(const BetaParams& p, double t) { return std::exp(log_beta_pdf(p, t)); }

/// Regularized incomplete Beta I_z(c, d), i.e. the Beta(c, d) cdf. Backed by Boost.Math.
inline double incomplete_beta(const BetaParams& p, double z) {
  p.validate();
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("incomplete_beta: z must lie in [0,1]");
  return boost::math::ibeta(static_cast<double>(p.c), static_cast<double>(p.d), z);
}

/// Binomial side of the Beta/binomial identity:
/// sum_{j=0}^{c-1} C(c+d-1, j) z^j (1-z)^(c+d-1-j), which equals 1 - I_z(c, d).
inline double binomial_lower_sum(const BetaParams& p, double z) {
  p.validate();
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("binomial_lower_sum: z must lie in [0,1]");
  const std::uint64_t m = p.c + p.d - 1;
  if (z == 0.0) return 1.0;
  if (z == 1.0) return 0.0;
  const double lz = std::log(z);
  const double l1z = std::log1p(-z);
  double sum = 0.0;
  for (std::uint64_t j = 0; j < p.c; ++j) {
    const auto jd = static_cast<double>(j);
    sum += std::exp(log_binomial(m, j) + jd * lz + (static_cast<double>(m) - jd) * l1z);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Positive-part moments of order statistics

enum class MomentKind {
  upper,  ///< E[(|Beta(l, n-l+1) - rate*l|^+)^a]
  lower,  ///< E[(|rate*l - Beta(l, n-l+1)|^+)^a]
};

struct MomentQuery {
  std::uint64_t l = 1;
  std::uint64_t n = 1;
  double a = 1.0;
  double rate = 0.0;
  MomentKind kind = MomentKind::upper;

  void validate() const {
    if (l < 1 || l > n) throw std::invalid_argument("MomentQuery: need 1 <= l <= n");
    if (!(a > 0.0)) throw std::invalid_argument("MomentQuery: a must be > 0");
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("MomentQuery: bad rate");
  }
};

namespace detail {

using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
double adaptive_gk(const F& f, double a, double b, double abs_tol, int depth) {
  double err = 0.0;
  const double est = GK31::integrate(f, a, b, 0, 0.0, &err);
  if (depth == 0 || err <= std::max(abs_tol, 1e-10 * std::abs(est))) return est;
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * abs_tol, depth - 1) + adaptive_gk(f, mid, b, 0.5 * abs_tol, depth - 1);
}

/// Adaptive 31-point Gauss-Kronrod on [lo, hi] split at the given breakpoints.
/// The absolute tolerance comes from a coarse pass over all pieces, so pieces
/// that contribute nothing (or underflow) are not refined. The Kronrod error
/// estimate bottoms out near 1e-10 relative, which sets both tolerances.
template <class F>
double integrate_split(F&& f, double lo, double hi, std::vector<double> cuts) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::erase_if(cuts, [&](double c) { return !(c >= lo && c <= hi); });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double coarse = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    coarse += std::abs(GK31::integrate(f, cuts[i], cuts[i + 1], 0, 0.0));
  const double abs_tol = 1e-10 * coarse;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += adaptive_gk(f, cuts[i], cuts[i + 1], abs_tol, 12);
  }
  return total;
}

}  // namespace detail

/**
 * @brief Positive-part moment of the l-th uniform order statistic.
 *
 * Adaptive quadrature over the region where the positive part is non-zero,
 * with breakpoints around the Beta bulk (the integrand is sharply peaked near
 * l/n). Relative accuracy is about 1e-10; values below ~1e-300 flush to zero.
 */
inline double positive_part_moment(const MomentQuery& q) {
  q.validate();
  const double nd = static_cast<double>(q.n);
  const double ld = static_cast<double>(q.l);
  const double threshold = q.rate * ld;
  const double mean = ld / (nd + 1.0);
  const double sd = std::sqrt(ld * (nd - ld + 1.0) / ((nd + 1.0) * (nd + 1.0) * (nd + 2.0)));

  double lo = 0.0;
  double hi = 1.0;
  if (q.kind == MomentKind::upper) {
    if (threshold >= 1.0) return 0.0;
    lo = threshold;
  } else {
    if (threshold <= 0.0) return 0.0;
    hi = std::min(threshold, 1.0);
  }

  const double log_norm = std::log(ld) + log_binomial(q.n, q.l);
  auto integrand = [&](double t) {
    const double gap = q.kind == MomentKind::upper ? t - threshold : threshold - t;
    if (gap <= 0.0 || t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(q.a * std::log(gap) + log_norm + (ld - 1.0) * std::log(t) + (nd - ld) * std::log1p(-t));
  };

  std::vector<double> cuts;
  for (double k : {-30.0, -10.0, -5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 5.0, 10.0, 30.0})
    cuts.push_back(mean + k * sd);
  const double edge = q.kind == MomentKind::upper ? lo : hi;
  const double dir = q.kind == MomentKind::upper ? 1.0 : -1.0;
  for (double k : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) cuts.push_back(edge + dir * k * sd);
  return detail::integrate_split(integrand, lo, hi, std::move(cuts));
}

/// max over l in [1, n] of positive_part_moment.
inline double max_positive_part_moment(std::uint64_t n, double a, double rate, MomentKind kind) {
  double best = 0.0;
  for (std::uint64_t l = 1; l <= n; ++l)
    best = std::max(best, positive_part_moment({l, n, a, rate, kind}));
  return best;
}

/// sum_{l=1}^{n} (n / l) * positive_part_moment(l, n, a, rate, kind).
inline double lemma_sum_bound(std::uint64_t n, double a, double rate, MomentKind kind) {
  if (n < 1) throw std::invalid_argument("lemma_sum_bound: n must be >= 1");
  const double nd = static_cast<double>(n);
  double sum = 0.0;
  for (std::uint64_t l = 1; l <= n; ++l) {
    if (kind == MomentKind::upper && rate * static_cast<double>(l) >= 1.0) break;
    sum += nd / static_cast<double>(l) * positive_part_moment({l, n, a, rate, kind});
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Proven inequalities, checked numerically

/// Pr[Beta(n,1) < 1 - n^(-a/(1+a))] < exp(-n^(1/(1+a))), with the left side
/// evaluated through the closed-form cdf I_z(n,1) = z^n, both sides in log-space.
inline bool verify_lemma_first(std::uint64_t n, double a) {
  if (n < 1) throw std::invalid_argument("verify_lemma_first: n must be >= 1");
  if (!(a > 0.0)) throw std::invalid_argument("verify_lemma_first: a must be > 0");
  const double nd = static_cast<double>(n);
  const double x = std::pow(nd, -a / (1.0 + a));
  if (x >= 1.0) return true;  // n = 1: probability 0
  const double log_lhs = nd * std::log1p(-x);
  const double log_rhs = -std::pow(nd, 1.0 / (1.0 + a));
  return log_lhs < log_rhs;
}

struct ProhorovSides {
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool holds = true;
};

/**
 * @brief Binomial-vs-Poisson bound
 * C(n,j) x^j (1-x)^(n-j) <= sqrt(n / m1) e^(-nx) (nx)^j / j!,
 * with m1 the integer in (n(1-x) - 1, n(1-x)].
 *
 * Admissible: 0 <= j <= n, 0 <= x < 1 and n(1-x) >= 1. The comparison allows a
 * rounding slack proportional to the magnitude of the log terms.
 */
inline ProhorovSides prohorov_sides(std::uint64_t n, std::uint64_t j, double x) {
  if (n < 1 || j > n) throw std::invalid_argument("verify_prohorov: need 0 <= j <= n, n >= 1");
  const double nd = static_cast<double>(n);
  const double jd = static_cast<double>(j);
  if (!(x >= 0.0 && x < 1.0) || nd * (1.0 - x) < 1.0)
    throw std::invalid_argument("verify_prohorov: need 0 <= x < 1 and n(1-x) >= 1");
  const double m1 = std::floor(nd * (1.0 - x));

  ProhorovSides out;
  double scale = 1.0;
  if (x == 0.0) {
    out.log_lhs = j == 0 ? 0.0 : -INFINITY;
    out.log_rhs = j == 0 ? 0.5 * std::log(nd / m1) : -INFINITY;
  } else {
    const double lb = log_binomial(n, j);
    const double t1 = jd * std::log(x);
    const double t2 = (nd - jd) * std::log1p(-x);
    out.log_lhs = lb + t1 + t2;
    const double r1 = jd * std::log(nd * x);
    const double r2 = log_gamma(jd + 1.0);
    out.log_rhs = 0.5 * std::log(nd / m1) - nd * x + r1 - r2;
    scale += std::abs(lb) + std::abs(t1) + std::abs(t2) + std::abs(r1) + std::abs(r2) + nd * x;
  }
  if (out.log_lhs == -INFINITY)
    out.holds = true;
  else
    out.holds = out.log_lhs <= out.log_rhs + 1e-13 * scale;
  return out;
}

inline bool verify_prohorov(std::uint64_t n, std::uint64_t j, double x) { return prohorov_sides(n, j, x).holds; }

// ---------------------------------------------------------------------------
// Series/integral identity behind the anchor-cost constant

/// Coefficient (-1)^k k! / ((2k)! 2^k (1+2k)) of the series integrated against y^(2k-a-1).
inline double anchor_series_coefficient(int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= -1.0 / (4.0 * (2.0 * i + 3.0));
  return c;
}

/// Closed form sqrt(pi) / 2^(2 + 3a/2) * cot(a pi / 2) * Gamma(-1/2 - a/2), written through
/// the reflection formula as -pi^(3/2) / (2^(2+3a/2) sin(a pi/2) Gamma((a+3)/2)) so that
/// odd integer a (removable singularity) evaluates cleanly.
inline double series_integral_closed_form(double a) {
  const double pi = std::numbers::pi;
  return -std::pow(pi, 1.5) / (std::pow(2.0, 2.0 + 1.5 * a) * std::sin(a * pi / 2.0) * std::tgamma((a + 3.0) / 2.0));
}

/// The same closed form evaluated literally (cot and Gamma at a negative argument).
/// Undefined at odd integers, where both factors are singular.
inline double series_integral_closed_form_literal(double a) {
  const double pi = std::numbers::pi;
  return std::sqrt(pi) / std::pow(2.0, 2.0 + 1.5 * a) / std::tan(a * pi / 2.0) * std::tgamma(-0.5 - a / 2.0);
}

struct SeriesIdentityCheck {
  double series_side = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  bool ok = false;
};

/**
 * @brief Numerically evaluates
 *   int_0^inf sum_{k > floor(a/2)} c_k y^(2k-a-1) dy
 * and compares it with the closed form to 1e-10 relative.
 *
 * (0, 1] is integrated term by term; [1, 12] by quadrature of the series summed
 * in extended precision (terms dropped once below 1e-16 of the running sum);
 * [12, inf) through the large-y expansion of the full series,
 * sum_m (2m-1)!! 4^(m+1) y^-(2m+2), minus the subtracted low-order terms.
 */
inline SeriesIdentityCheck verify_series_integral_identity(double a) {
  if (!(a > 0.0) || a > 40.0) throw std::invalid_argument("verify_series_integral_identity: a must lie in (0, 40]");
  const double nearest_even = 2.0 * std::round(a / 2.0);
  if (std::abs(a - nearest_even) < 1e-3)
    throw std::invalid_argument("verify_series_integral_identity: a too close to an even integer");

  const int first_k = static_cast<int>(std::floor(a / 2.0)) + 1;
  constexpr double kSplit = 1.0;
  constexpr double kTail = 12.0;

  double head = 0.0;
  for (int k = first_k; k < first_k + 60; ++k) {
    const double term = anchor_series_coefficient(k) / (2.0 * k - a);
    head += term;
    if (std::abs(term) < 1e-18 * std::abs(head)) break;
  }

  auto tail_series = [&](double y) {
    const long double yy = static_cast<long double>(y) * y;
    long double c = 1.0L;
    long double power = 1.0L;
    for (int k = 0; k < first_k; ++k) {
      c *= -1.0L / (4.0L * (2.0L * k + 3.0L));
      power *= yy;
    }
    long double sum = 0.0L;
    for (int k = first_k;; ++k) {
      const long double term = c * power;
      sum += term;
      if (static_cast<long double>(k) > yy && std::abs(term) < 1e-16L * std::max(1e-300L, std::abs(sum))) break;
      if (k > 4000) break;
      c *= -1.0L / (4.0L * (2.0L * k + 3.0L));
      power *= yy;
    }
    return static_cast<double>(sum) * std::pow(y, -a - 1.0);
  };
  const double middle = detail::integrate_split(tail_series, kSplit, kTail, {2.0, 4.0, 6.0, 8.0, 10.0});

  double tail = 0.0;
  double prev = INFINITY;
  double coeff = 4.0;  // (2m-1)!! 4^(m+1) at m = 0
  for (int m = 0; m < 60; ++m) {
    const double expo = a + 2.0 + 2.0 * m;
    const double term = coeff * std::pow(kTail, -expo) / expo;
    if (std::abs(term) >= prev) break;  // asymptotic series: stop at the smallest term
    tail += term;
    prev = std::abs(term);
    if (prev < 1e-20) break;
    coeff *= (2.0 * m + 1.0) * 4.0;
  }
  for (int k = 0; k < first_k; ++k)
    tail -= anchor_series_coefficient(k) * std::pow(kTail, 2.0 * k - a) / (a - 2.0 * k);

  SeriesIdentityCheck out;
  out.series_side = head + middle + tail;
  out.closed_form = series_integral_closed_form(a);
  out.relative_error = std::abs(out.series_side - out.closed_form) / std::abs(out.closed_form);
  out.ok = out.relative_error < 1e-10;
  return out;
}

}  // namespace mobsense
