#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mobsense/random.hpp"
#include "mobsense/square.hpp"

using namespace mobsense;

TEST(Isqrt, ExactAroundSquares) {
  for (std::size_t q = 0; q < 3000; ++q) {
    EXPECT_EQ(isqrt(q * q), q);
    if (q > 0) {
      EXPECT_EQ(isqrt(q * q - 1), q - 1);
    }
  }
}

TEST(GridAnchors, SinglePoint) {
  const GridAnchors g = grid_anchors(1);
  ASSERT_EQ(g.points.size(), 1u);
  EXPECT_EQ(g.points[0].x, 0.5);
  EXPECT_EQ(g.points[0].y, 0.5);
}

TEST(GridAnchors, TwoByTwo) {
  const GridAnchors g = grid_anchors(2);
  const std::vector<Point2> expected{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}};
  ASSERT_EQ(g.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(g.points[i].x, expected[i].x);
    EXPECT_EQ(g.points[i].y, expected[i].y);
  }
}

TEST(GridAnchors, ThreeByThreeExtent) {
  const GridAnchors g = grid_anchors(3);
  ASSERT_EQ(g.points.size(), 9u);
  double lo = 1.0, hi = 0.0;
  for (Point2 p : g.points) {
    lo = std::min({lo, p.x, p.y});
    hi = std::max({hi, p.x, p.y});
  }
  EXPECT_NEAR(lo, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(hi, 5.0 / 6.0, 1e-15);
  EXPECT_THROW(grid_anchors(0), std::invalid_argument);
}

TEST(CV2, SingleSensorSnapsToCentreRow) {
  for (double x : {0.0, 0.3, 0.5, 0.9}) {
    const Placement2D p({{x, 0.1}});
    const CV2Result r = cv2_algorithm(p, {0.6, 0.0, 1.0}, SeedSpec{1, 1});
    EXPECT_EQ(r.placement.current[0].y, 0.5);
    // One square of half-side 0.6 covers the unit square from anywhere within 0.1 of the centre.
    EXPECT_LE(std::abs(r.placement.current[0].x - 0.5), 0.1 + 1e-15);
    EXPECT_TRUE(verify_ci_2d(r.placement, {2, 0.6, 0.0}));
  }
}

TEST(CV2, RowStructureAndLeftovers) {
  const std::size_t n = 1000;  // q = 31, 39 leftovers
  const std::size_t q = isqrt(n);
  const Placement2D p = sample_uniform_2d(n, SeedSpec{12, 0});
  const CV2Result r = cv2_algorithm(p, {1.2 / (2.0 * q), 0.5 / q, 2.0}, SeedSpec{12, 1});
  std::vector<std::size_t> per_row(q, 0);
  std::size_t untouched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 c = r.placement.current[i];
    const bool moved = c.x != p.initial[i].x || c.y != p.initial[i].y;
    const double row = c.y * q - 0.5;
    const auto j = static_cast<std::size_t>(std::llround(row));
    const bool on_row = std::abs(row - double(j)) < 1e-9 && c.y == (j + 1.0) / q - 1.0 / (2.0 * q);
    if (on_row) {
      ++per_row[j];
    } else {
      // Leftovers stay where they are, inactive, at zero cost.
      EXPECT_FALSE(moved);
      EXPECT_FALSE(r.placement.active[i]);
      EXPECT_EQ(r.report.per_sensor[i], 0.0);
      ++untouched;
    }
  }
  EXPECT_EQ(untouched, n - q * q);
  for (std::size_t c : per_row) EXPECT_EQ(c, q);
  EXPECT_EQ(r.rows_case_a + r.rows_case_b + r.rows_case_c, q);
}

TEST(CV2, NetCostIsEuclideanAndBelowPhasewise) {
  const std::size_t n = 400;
  const Placement2D p = sample_uniform_2d(n, SeedSpec{13, 0});
  const CV2Result r = cv2_algorithm(p, {1.2 / 40.0, 0.5 / 20.0, 1.0}, SeedSpec{13, 1});
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distance(p.initial[i], r.placement.current[i]);
    EXPECT_NEAR(r.report.per_sensor[i], d, 1e-15);
    sum += d;
  }
  EXPECT_NEAR(r.report.total, sum, 1e-12 * sum);
  EXPECT_LE(r.report.total, r.report.phasewise_total + 1e-12);
}

TEST(CV2, Deterministic) {
  const Placement2D p = sample_uniform_2d(150, SeedSpec{14, 0});
  const CV2Params params{1.2 / 24.0, 0.5 / 12.0, 1.0};
  const CV2Result a = cv2_algorithm(p, params, SeedSpec{14, 1});
  const CV2Result b = cv2_algorithm(p, params, SeedSpec{14, 1});
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(a.placement.current[i].x, b.placement.current[i].x);
    EXPECT_EQ(a.placement.current[i].y, b.placement.current[i].y);
  }
  EXPECT_EQ(a.report.total, b.report.total);
}

TEST(CV2, YTiesBreakByXThenIndex) {
  // Four sensors on one horizontal line: the x order decides the rows.
  const Placement2D p({{0.9, 0.5}, {0.1, 0.5}, {0.6, 0.5}, {0.4, 0.5}});
  const CV2Result r = cv2_algorithm(p, {0.3, 0.0, 1.0}, SeedSpec{});
  // q = 2: the two smallest x go to the lower row.
  EXPECT_EQ(r.placement.current[1].y, 0.25);
  EXPECT_EQ(r.placement.current[3].y, 0.25);
  EXPECT_EQ(r.placement.current[0].y, 0.75);
  EXPECT_EQ(r.placement.current[2].y, 0.75);
}

TEST(CV2, SolvesCoverageAndInterferenceOnRandomTrials) {
  for (std::size_t n : {1u, 2u, 4u, 5u, 17u, 100u, 399u, 400u, 1000u}) {
    const double q = static_cast<double>(isqrt(n));
    for (double a : {1.0, 2.0}) {
      for (double r2q : {1.05, 1.2, 2.0}) {
        for (double sq : {0.0, 0.5, 0.95}) {
          const CV2Params params{r2q / (2.0 * q), sq / q, a};
          for (std::uint64_t t = 0; t < 5; ++t) {
            SplitMix64 rng(SeedSpec{n, t});
            const CV2Result r = cv2_algorithm(sample_uniform_2d(n, rng), params, rng);
            const CandIVerdict v = verify_ci_2d(r.placement, {2, params.r2, params.s});
            ASSERT_TRUE(v) << "n=" << n << " a=" << a << " r2q=" << r2q << " sq=" << sq << ": " << v.message;
          }
        }
      }
    }
  }
}

TEST(CV2, RejectsInadmissibleParams) {
  const Placement2D p({{0.2, 0.2}, {0.8, 0.8}, {0.3, 0.6}, {0.5, 0.5}});
  EXPECT_THROW(cv2_algorithm(p, {0.25, 0.0, 1.0}, SeedSpec{}), std::invalid_argument);
  EXPECT_THROW(cv2_algorithm(p, {0.3, 0.5, 1.0}, SeedSpec{}), std::invalid_argument);
}

// --- exact matching to the grid ----------------------------------------------

namespace {

double brute_force_matching(const std::vector<Point2>& xs, const std::vector<Point2>& zs, double a) {
  std::vector<std::size_t> perm(xs.size());
  std::iota(perm.begin(), perm.end(), 0u);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) c += std::pow(distance(xs[i], zs[perm[i]]), a);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(AnchorMatching2D, ZeroOnAnchors) {
  const GridAnchors g = grid_anchors(4);
  std::vector<Point2> pts(g.points.rbegin(), g.points.rend());
  EXPECT_EQ(anchor_matching_cost_2d(Placement2D(pts), g, 1.0), 0.0);
}

TEST(AnchorMatching2D, SinglePair) {
  EXPECT_NEAR(anchor_matching_cost_2d(Placement2D({{0.0, 0.0}}), grid_anchors(1), 1.0), std::sqrt(0.5), 1e-15);
}

TEST(AnchorMatching2D, MatchesBruteForceOnFourPoints) {
  SplitMix64 rng(SeedSpec{21, 0});
  const GridAnchors g = grid_anchors(2);
  for (int t = 0; t < 200; ++t) {
    const Placement2D p = sample_uniform_2d(4, rng);
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
      const double expected = brute_force_matching(p.current, g.points, a);
      EXPECT_NEAR(anchor_matching_cost_2d(p, g, a), expected, 1e-12 * std::max(1.0, expected));
    }
  }
}

TEST(AnchorMatching2D, InvariantUnderRelabelingAndSymmetry) {
  const GridAnchors g = grid_anchors(5);
  SplitMix64 rng(SeedSpec{22, 0});
  const Placement2D p = sample_uniform_2d(25, rng);
  const double base = anchor_matching_cost_2d(p, g, 1.5);

  std::vector<Point2> shuffled = p.current;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
  EXPECT_NEAR(anchor_matching_cost_2d(Placement2D(shuffled), g, 1.5), base, 1e-12 * base);

  // The grid is invariant under the dihedral symmetries of the square.
  auto transformed = [&](auto f) {
    std::vector<Point2> out;
    for (Point2 x : p.current) out.push_back(f(x));
    return anchor_matching_cost_2d(Placement2D(out), g, 1.5);
  };
  EXPECT_NEAR(transformed([](Point2 x) { return Point2{1.0 - x.x, x.y}; }), base, 1e-12 * base);
  EXPECT_NEAR(transformed([](Point2 x) { return Point2{x.y, x.x}; }), base, 1e-12 * base);
  EXPECT_NEAR(transformed([](Point2 x) { return Point2{1.0 - x.y, x.x}; }), base, 1e-12 * base);
}

TEST(AnchorMatching2D, RejectsWrongCount) {
  EXPECT_THROW(anchor_matching_cost_2d(Placement2D({{0.1, 0.1}, {0.2, 0.2}}), grid_anchors(2), 1.0),
               std::invalid_argument);
}
