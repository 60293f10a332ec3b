#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mobsense/geometry.hpp"
#include "mobsense/line.hpp"
#include "mobsense/matching.hpp"
#include "mobsense/random.hpp"

namespace mobsense {

/// floor(sqrt(n)) without floating-point edge errors.
inline std::size_t isqrt(std::size_t n) {
  auto q = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (q * q > n) --q;
  while ((q + 1) * (q + 1) <= n) ++q;
  return q;
}

/// The q x q grid (k/q - 1/(2q), l/q - 1/(2q)), k outer, l inner, 1 <= k,l <= q.
struct GridAnchors {
  std::size_t q = 0;
  std::vector<Point2> points;
};

inline GridAnchors grid_anchors(std::size_t q) {
  if (q < 1) throw std::invalid_argument("grid_anchors: q must be >= 1");
  GridAnchors g{q, {}};
  g.points.reserve(q * q);
  for (std::size_t k = 0; k < q; ++k)
    for (std::size_t l = 0; l < q; ++l) g.points.push_back({detail::anchor_position(k, q), detail::anchor_position(l, q)});
  return g;
}

/// Square sensing radius r2 and interference distance s; epsilon = 2 floor(sqrt(n)) r2 - 1.
struct CV2Params {
  double r2 = 0.0;
  double s = 0.0;
  double a = 1.0;

  double epsilon(std::size_t n) const { return 2.0 * static_cast<double>(isqrt(n)) * r2 - 1.0; }

  void validate(std::size_t n) const {
    if (!(r2 > 0.0) || !std::isfinite(r2)) throw std::invalid_argument("CV2Params: r2 must be > 0");
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("CV2Params: s must be >= 0");
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("CV2Params: a must be > 0");
    if (!(epsilon(n) > 0.0)) throw std::invalid_argument("CV2Params: need r2 > 1/(2 floor(sqrt n))");
    if (!(s * static_cast<double>(isqrt(n)) < 1.0))
      throw std::invalid_argument("CV2Params: need s < 1/floor(sqrt n)");
  }
};

struct CV2Result {
  Placement2D placement;
  DisplacementReport report;
  std::size_t rows_case_a = 0;
  std::size_t rows_case_b = 0;
  std::size_t rows_case_c = 0;
};

/**
 * @brief Algorithm CV2(n, r2, s) on the unit square.
 *
 * q = floor(sqrt n). q^2 sensors are picked uniformly at random (the rest are
 * switched off where they stand), ranked by y (ties by x, then index), and the
 * j-th block of q snaps vertically onto row ordinate j/q - 1/(2q). Each row then
 * runs CV1 on its x-coordinates with n := q, r1 := r2. The report's `total` uses
 * straight-line distances; `phasewise_total` uses vertical plus horizontal path.
 */
inline CV2Result cv2_algorithm(const Placement2D& p, const CV2Params& params, SplitMix64& rng) {
  const std::size_t n = p.size();
  params.validate(n);
  p.validate();
  const std::size_t q = isqrt(n);
  const std::size_t chosen_count = q * q;

  CV2Result out{p, {}};
  Placement2D& pl = out.placement;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (chosen_count < n) {
    for (std::size_t i = 0; i < chosen_count; ++i) std::swap(order[i], order[i + rng.below(n - i)]);
    for (std::size_t i = chosen_count; i < n; ++i) pl.active[order[i]] = 0;
    order.resize(chosen_count);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return std::tie(p.initial[l].y, p.initial[l].x, l) < std::tie(p.initial[r].y, p.initial[r].x, r);
  });

  const CV1Params row_params{params.r2, params.s, params.a};
  std::vector<std::size_t> row(q);
  std::vector<double> xs(q);
  for (std::size_t j = 0; j < q; ++j) {
    const double ordinate = detail::anchor_position(j, q);
    std::copy_n(order.begin() + static_cast<std::ptrdiff_t>(j * q), q, row.begin());
    for (std::size_t i : row) {
      pl.travelled[i] += std::abs(ordinate - pl.current[i].y);
      pl.current[i].y = ordinate;
    }
    std::sort(row.begin(), row.end(), [&](std::size_t l, std::size_t r) {
      return std::tie(pl.current[l].x, l) < std::tie(pl.current[r].x, r);
    });
    for (std::size_t k = 0; k < q; ++k) xs[k] = pl.current[row[k]].x;

    CV1Result line = cv1_algorithm(Placement1D(xs), row_params);
    switch (line.case_label) {
      case CV1Case::A: ++out.rows_case_a; break;
      case CV1Case::B: ++out.rows_case_b; break;
      case CV1Case::C: ++out.rows_case_c; break;
    }
    for (std::size_t k = 0; k < q; ++k) {
      const std::size_t i = row[k];
      pl.current[i].x = line.placement.current[k];
      pl.travelled[i] += line.placement.travelled[k];
      pl.active[i] = line.placement.active[k];
    }
  }

  out.report = displacement_report(pl, params.a);
  return out;
}

inline CV2Result cv2_algorithm(const Placement2D& p, const CV2Params& params, SeedSpec seed) {
  SplitMix64 rng(seed);
  return cv2_algorithm(p, params, rng);
}

/// min over permutations pi of sum_i d(X_i, Z_pi(i))^a for the current sensor positions.
inline double anchor_matching_cost_2d(const Placement2D& p, const GridAnchors& anchors, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("anchor_matching_cost_2d: a must be > 0");
  const std::size_t n = anchors.points.size();
  if (p.size() != n) throw std::invalid_argument("anchor_matching_cost_2d: need exactly q^2 sensors");
  CostMatrix cost(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost.set(i, j, std::pow(distance(p.current[i], anchors.points[j]), a));
  return hungarian(cost).total_cost;
}

}  // namespace mobsense
