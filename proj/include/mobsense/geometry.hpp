#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobsense {

/// Absolute tolerance used by every geometric predicate.
inline constexpr double kGeomTol = 1e-12;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 p, Point2 q) { return std::hypot(p.x - q.x, p.y - q.y); }

/**
 * @brief Sensors on the unit interval.
 *
 * `initial` holds the sorted starting positions, `current` the positions after
 * whatever algorithm ran, index-aligned. `travelled` accumulates the path
 * length of every individual move, so it is at least |current - initial|.
 */
struct Placement1D {
  std::vector<double> initial;
  std::vector<double> current;
  std::vector<char> active;
  std::vector<double> travelled;

  Placement1D() = default;

  /// Starts every sensor at rest and active. Throws on positions outside [0,1].
  explicit Placement1D(std::vector<double> positions)
      : initial(std::move(positions)),
        current(initial),
        active(initial.size(), 1),
        travelled(initial.size(), 0.0) {
    validate();
  }

  std::size_t size() const { return initial.size(); }

  std::size_t active_count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), char{1}));
  }

  void move_to(std::size_t i, double position) {
    travelled[i] += std::abs(position - current[i]);
    current[i] = position;
  }

  void validate() const {
    const std::size_t n = initial.size();
    if (n == 0) throw std::invalid_argument("Placement1D: needs at least one sensor");
    if (current.size() != n || active.size() != n || travelled.size() != n)
      throw std::invalid_argument("Placement1D: field lengths disagree");
    for (std::size_t i = 0; i < n; ++i) {
      for (double v : {initial[i], current[i]}) {
        if (!(v >= -kGeomTol && v <= 1.0 + kGeomTol))
          throw std::invalid_argument("Placement1D: position outside [0,1]");
      }
      if (i > 0 && initial[i] < initial[i - 1])
        throw std::invalid_argument("Placement1D: initial positions must be sorted");
    }
  }
};

/// Sensors on the unit square. Same conventions as Placement1D; not sorted.
struct Placement2D {
  std::vector<Point2> initial;
  std::vector<Point2> current;
  std::vector<char> active;
  std::vector<double> travelled;

  Placement2D() = default;

  explicit Placement2D(std::vector<Point2> positions)
      : initial(std::move(positions)),
        current(initial),
        active(initial.size(), 1),
        travelled(initial.size(), 0.0) {
    validate();
  }

  std::size_t size() const { return initial.size(); }

  std::size_t active_count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), char{1}));
  }

  void validate() const {
    const std::size_t n = initial.size();
    if (n == 0) throw std::invalid_argument("Placement2D: needs at least one sensor");
    if (current.size() != n || active.size() != n || travelled.size() != n)
      throw std::invalid_argument("Placement2D: field lengths disagree");
    auto inside = [](double v) { return v >= -kGeomTol && v <= 1.0 + kGeomTol; };
    for (std::size_t i = 0; i < n; ++i) {
      for (const Point2& p : {initial[i], current[i]}) {
        if (!inside(p.x) || !inside(p.y))
          throw std::invalid_argument("Placement2D: position outside [0,1]^2");
      }
    }
  }
};

/// Definition of the a-total displacement for one trial.
struct DisplacementReport {
  std::vector<double> per_sensor;  ///< net distance initial -> final
  double a = 1.0;
  double total = 0.0;              ///< sum of per_sensor^a
  double phasewise_total = 0.0;    ///< sum of (path length)^a, diagnostic only
  std::size_t deactivated_count = 0;
};

/// Parameters of the (r, s) coverage and interference requirement.
struct CandIParams {
  int m = 1;       ///< dimension, 1 or 2
  double r = 0.0;  ///< sensing radius (half-side of the square when m = 2)
  double s = 0.0;  ///< interference distance

  void validate() const {
    if (m != 1 && m != 2) throw std::invalid_argument("CandIParams: m must be 1 or 2");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("CandIParams: r must be > 0");
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("CandIParams: s must be >= 0");
  }
};

enum class CandIClause { none, coverage, interference };

struct CandIVerdict {
  bool ok = true;
  CandIClause violated = CandIClause::none;
  /// Uncovered witness point (coverage) or the two offending sensor indices.
  std::optional<Point2> uncovered;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::string message;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline void add_coverage_failure(CandIVerdict& v, Point2 where, int m) {
  if (v.ok) v.violated = CandIClause::coverage;
  v.ok = false;
  v.uncovered = where;
  std::ostringstream os;
  os.precision(17);
  if (m == 1)
    os << "coverage: point " << where.x << " is not covered";
  else
    os << "coverage: point (" << where.x << ", " << where.y << ") is not covered";
  v.message += (v.message.empty() ? "" : "; ") + os.str();
}

inline void add_interference_failure(CandIVerdict& v, std::size_t i, std::size_t j, double dist) {
  if (v.ok) v.violated = CandIClause::interference;
  v.ok = false;
  v.pair = std::make_pair(std::min(i, j), std::max(i, j));
  std::ostringstream os;
  os.precision(17);
  os << "interference: sensors " << v.pair->first << " and " << v.pair->second << " are " << dist
     << " apart";
  v.message += (v.message.empty() ? "" : "; ") + os.str();
}

/// Returns a point of [0,1] not covered by the closed intervals, if any.
inline std::optional<double> first_gap(std::vector<std::pair<double, double>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  double reach = 0.0;
  for (const auto& [lo, hi] : intervals) {
    if (lo > reach + kGeomTol) return 0.5 * (reach + lo);
    reach = std::max(reach, hi);
    if (reach >= 1.0 - kGeomTol) return std::nullopt;
  }
  return 0.5 * (reach + 1.0);
}

}  // namespace detail

/// Checks coverage of [0,1] by [y-r, y+r] over active sensors and pairwise spacing >= s.
/// A failed verdict carries a witness for every violated clause; `violated` names the first.
inline CandIVerdict verify_ci_1d(const Placement1D& p, const CandIParams& params) {
  params.validate();
  if (params.m != 1) throw std::invalid_argument("verify_ci_1d: params.m must be 1");
  p.validate();

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.active[i]) idx.push_back(i);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t l, std::size_t r) { return p.current[l] < p.current[r]; });

  std::vector<std::pair<double, double>> intervals;
  intervals.reserve(idx.size());
  for (std::size_t i : idx) intervals.emplace_back(p.current[i] - params.r, p.current[i] + params.r);
  CandIVerdict verdict;
  if (auto gap = detail::first_gap(std::move(intervals)))
    detail::add_coverage_failure(verdict, {*gap, 0.0}, 1);

  for (std::size_t k = 1; k < idx.size(); ++k) {
    const double d = p.current[idx[k]] - p.current[idx[k - 1]];
    if (d < params.s - kGeomTol) {
      detail::add_interference_failure(verdict, idx[k - 1], idx[k], d);
      break;
    }
  }
  return verdict;
}

/**
 * @brief Coverage of the unit square by axis-aligned squares of half-side r
 * around active sensors, plus pairwise Euclidean spacing >= s.
 *
 * Coverage is decided exactly with a sweep over the horizontal strips between
 * consecutive distinct square y-extents.
 */
inline CandIVerdict verify_ci_2d(const Placement2D& p, const CandIParams& params) {
  params.validate();
  if (params.m != 2) throw std::invalid_argument("verify_ci_2d: params.m must be 2");
  p.validate();

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.active[i]) idx.push_back(i);

  const double r = params.r;
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i : idx) {
    cuts.push_back(std::clamp(p.current[i].y - r, 0.0, 1.0));
    cuts.push_back(std::clamp(p.current[i].y + r, 0.0, 1.0));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Squares ordered by bottom edge so each strip only scans candidates.
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t l, std::size_t rr) { return p.current[l].y < p.current[rr].y; });
  CandIVerdict verdict;
  std::vector<std::pair<double, double>> row;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (hi - lo <= kGeomTol) continue;
    row.clear();
    for (std::size_t i : idx) {
      const Point2 c = p.current[i];
      if (c.y - r > lo + kGeomTol) break;
      if (c.y + r >= hi - kGeomTol) row.emplace_back(c.x - r, c.x + r);
    }
    if (auto gap = detail::first_gap(row)) {
      detail::add_coverage_failure(verdict, {*gap, 0.5 * (lo + hi)}, 2);
      break;
    }
  }

  std::sort(idx.begin(), idx.end(),
            [&](std::size_t l, std::size_t rr) { return p.current[l].x < p.current[rr].x; });
  for (std::size_t k = 0; k < idx.size(); ++k) {
    for (std::size_t m = k + 1; m < idx.size(); ++m) {
      const Point2 u = p.current[idx[k]];
      const Point2 w = p.current[idx[m]];
      if (w.x - u.x >= params.s) break;
      const double d = distance(u, w);
      if (d < params.s - kGeomTol) {
        detail::add_interference_failure(verdict, idx[k], idx[m], d);
        return verdict;
      }
    }
  }
  return verdict;
}

namespace detail {

inline DisplacementReport build_report(std::vector<double> net, const std::vector<double>& travelled,
                                       const std::vector<char>& active, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("displacement_report: a must be > 0");
  DisplacementReport rep;
  rep.a = a;
  rep.per_sensor = std::move(net);
  for (double d : rep.per_sensor) rep.total += std::pow(d, a);
  for (double t : travelled) rep.phasewise_total += std::pow(t, a);
  rep.deactivated_count =
      static_cast<std::size_t>(std::count(active.begin(), active.end(), char{0}));
  return rep;
}

}  // namespace detail

/// a-total displacement of a 1D move. Deactivated sensors keep their movement cost.
inline DisplacementReport displacement_report(const std::vector<double>& initial,
                                              const std::vector<double>& final_pos,
                                              const std::vector<char>& active, double a) {
  if (initial.size() != final_pos.size() || initial.size() != active.size())
    throw std::invalid_argument("displacement_report: length mismatch");
  std::vector<double> net(initial.size());
  for (std::size_t i = 0; i < net.size(); ++i) net[i] = std::abs(final_pos[i] - initial[i]);
  return detail::build_report(net, net, active, a);
}

/// 2D variant; distances are Euclidean.
inline DisplacementReport displacement_report(const std::vector<Point2>& initial,
                                              const std::vector<Point2>& final_pos,
                                              const std::vector<char>& active, double a) {
  if (initial.size() != final_pos.size() || initial.size() != active.size())
    throw std::invalid_argument("displacement_report: length mismatch");
  std::vector<double> net(initial.size());
  for (std::size_t i = 0; i < net.size(); ++i) net[i] = distance(initial[i], final_pos[i]);
  return detail::build_report(net, net, active, a);
}

/// Report for a finished placement; the phase-wise column uses the tracked path lengths.
inline DisplacementReport displacement_report(const Placement1D& p, double a) {
  std::vector<double> net(p.size());
  for (std::size_t i = 0; i < net.size(); ++i) net[i] = std::abs(p.current[i] - p.initial[i]);
  return detail::build_report(std::move(net), p.travelled, p.active, a);
}

inline DisplacementReport displacement_report(const Placement2D& p, double a) {
  std::vector<double> net(p.size());
  for (std::size_t i = 0; i < net.size(); ++i) net[i] = distance(p.initial[i], p.current[i]);
  return detail::build_report(std::move(net), p.travelled, p.active, a);
}

}  // namespace mobsense
