#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "mobsense/beta.hpp"
#include "mobsense/geometry.hpp"

namespace mobsense {

struct LineResult {
  Placement1D placement;
  DisplacementReport report;
};

namespace detail {

inline void require_sorted_active(const Placement1D& p, const char* who) {
  p.validate();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.active[i]) throw std::invalid_argument(std::string(who) + ": all sensors must be active");
    if (i > 0 && p.current[i] < p.current[i - 1])
      throw std::invalid_argument(std::string(who) + ": positions must be sorted");
  }
}

inline double anchor_position(std::size_t i, std::size_t n) {
  const double nd = static_cast<double>(n);
  return (static_cast<double>(i) + 1.0) / nd - 1.0 / (2.0 * nd);
}

}  // namespace detail

/// Sends the i-th sensor in sorted order to the equidistant anchor i/n - 1/(2n).
inline LineResult move_to_anchors_1d(const Placement1D& p, double a) {
  detail::require_sorted_active(p, "move_to_anchors_1d");
  LineResult out{p, {}};
  for (std::size_t i = 0; i < p.size(); ++i) out.placement.move_to(i, detail::anchor_position(i, p.size()));
  out.report = displacement_report(out.placement, a);
  return out;
}

/// Leading term Gamma(a/2 + 1) / (2^(a/2) (1 + a)) * n^(1 - a/2) of the expected anchor cost.
inline double anchor_cost_leading_term(double a, std::size_t n) {
  if (!(a > 0.0) || a > 98.0) throw std::invalid_argument("anchor_cost_leading_term: a must lie in (0, 98]");
  if (n < 1) throw std::invalid_argument("anchor_cost_leading_term: n must be >= 1");
  return gamma_fn(a / 2.0 + 1.0) / (std::pow(2.0, a / 2.0) * (1.0 + a)) *
         std::pow(static_cast<double>(n), 1.0 - a / 2.0);
}

/// Consecutive-gap window for MV: every gap ends up in [s, rho].
struct MVParams {
  double rho = 0.0;
  double s = 0.0;

  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("MVParams: rho must be > 0");
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("MVParams: s must be >= 0");
    if (!(s < rho)) throw std::invalid_argument("MVParams: s must be < rho");
  }
};

namespace detail {

/**
 * In-place MV on a sorted, all-active placement.
 *
 * Sweep left to right: a sensor closer than s to its (already placed)
 * predecessor is pushed right to min(prev + s, 1); one further than rho is
 * pulled left to prev + rho. The origin acts as sensor 0. Sensors that pile up
 * at 1 are then deactivated: all of them when the last sensor before the pile
 * is within s of 1, all but the first otherwise. Finally, when the leftmost
 * sensor sits beyond rho/2, everything (piled sensors included) shifts left so
 * it lands on rho/2.
 */
inline void run_mv(Placement1D& p, const MVParams& params) {
  const std::size_t n = p.size();
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = p.current[i] - prev;
    if (gap < params.s)
      p.move_to(i, std::min(params.s + prev, 1.0));
    else if (gap > params.rho)
      p.move_to(i, params.rho + prev);
    prev = p.current[i];
  }

  std::size_t pile = n;
  while (pile > 0 && p.current[pile - 1] == 1.0) --pile;
  if (pile < n) {
    std::size_t keep_until = pile + 1;  // first deactivated index
    if (pile == 0)
      keep_until = 1;  // everything piled at 1; the first one keeps sensing
    else if (1.0 - p.current[pile - 1] < params.s - kGeomTol)
      keep_until = pile;
    for (std::size_t i = keep_until; i < n; ++i) p.active[i] = 0;
  }

  if (p.current[0] > 0.5 * params.rho) {
    const double z = p.current[0] - 0.5 * params.rho;
    for (std::size_t i = 0; i < n; ++i) p.move_to(i, p.current[i] - z);
  }
}

}  // namespace detail

/// Algorithm MV(n, rho, s): see detail::run_mv. Cost is reported with exponent a.
inline LineResult mv_algorithm(const Placement1D& p, const MVParams& params, double a) {
  params.validate();
  detail::require_sorted_active(p, "mv_algorithm");
  LineResult out{p, {}};
  detail::run_mv(out.placement, params);
  out.report = displacement_report(out.placement, a);
  return out;
}

/// Coverage-and-interference parameters on the line. epsilon = 2 n r1 - 1 is derived per n.
struct CV1Params {
  double r1 = 0.0;
  double s = 0.0;
  double a = 1.0;  ///< enters the case-B threshold 2 / n^(a/(a+1))

  double epsilon(std::size_t n) const { return 2.0 * static_cast<double>(n) * r1 - 1.0; }

  void validate(std::size_t n) const {
    if (!(r1 > 0.0) || !std::isfinite(r1)) throw std::invalid_argument("CV1Params: r1 must be > 0");
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("CV1Params: s must be >= 0");
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("CV1Params: a must be > 0");
    if (!(epsilon(n) > 0.0)) throw std::invalid_argument("CV1Params: need r1 > 1/(2n)");
    if (!(s * static_cast<double>(n) < 1.0)) throw std::invalid_argument("CV1Params: need s < 1/n");
  }
};

enum class CV1Case : char { A = 'A', B = 'B', C = 'C' };

struct CV1Result {
  Placement1D placement;
  DisplacementReport report;
  CV1Case case_label = CV1Case::A;
};

namespace detail {

inline void run_cv1(Placement1D& p, const CV1Params& params, CV1Case& label) {
  const std::size_t n = p.size();
  const double nd = static_cast<double>(n);
  const double r1 = params.r1;
  run_mv(p, {(1.0 + params.epsilon(n) / 2.0) / nd, params.s});

  // Deactivated sensors form a suffix, so the last active one is the rightmost sensing sensor.
  std::size_t last = n - 1;
  while (last > 0 && !p.active[last]) --last;
  const double y_last = p.current[last];

  auto to_anchors = [&](Placement1D& q) {
    for (std::size_t i = 0; i < n; ++i) {
      q.move_to(i, anchor_position(i, n));
      q.active[i] = 1;
    }
  };

  if (y_last >= 1.0 - r1) {
    label = CV1Case::A;
  } else if (y_last <= 1.0 - 2.0 * std::pow(nd, -params.a / (params.a + 1.0))) {
    label = CV1Case::B;
    to_anchors(p);
  } else {
    label = CV1Case::C;
    const Placement1D after_mv = p;
    p.move_to(last, 1.0 - r1);
    std::size_t i = last;
    while (i > 0 && p.current[i] - p.current[i - 1] > 2.0 * r1) {
      --i;
      p.move_to(i, 1.0 - r1 - static_cast<double>(last - i) * 2.0 * r1);
    }
    // With sensors deactivated at 1, the packed chain can run out before reaching
    // the origin; the anchors are then the only way to restore coverage.
    if (i == 0 && p.current[0] > r1 + kGeomTol) {
      p = after_mv;
      label = CV1Case::B;
      to_anchors(p);
    }
  }
}

}  // namespace detail

/**
 * @brief Algorithm CV1(n, r1, s).
 *
 * Runs MV with rho = (1 + epsilon/2)/n, then dispatches on the rightmost active
 * sensor Y: A if Y >= 1 - r1 (nothing to do); B if Y <= 1 - 2 n^(-a/(a+1)) (all
 * sensors to the equidistant anchors); C otherwise (Y to 1 - r1, then pack
 * predecessors at spacing 2 r1 while the gap to the right exceeds 2 r1).
 * First match wins.
 */
inline CV1Result cv1_algorithm(const Placement1D& p, const CV1Params& params) {
  params.validate(p.size());
  detail::require_sorted_active(p, "cv1_algorithm");
  CV1Result out{p, {}, CV1Case::A};
  detail::run_cv1(out.placement, params, out.case_label);
  out.report = displacement_report(out.placement, params.a);
  return out;
}

}  // namespace mobsense
