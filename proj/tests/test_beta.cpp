#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mobsense/beta.hpp"
#include "mobsense/random.hpp"

using namespace mobsense;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma7over4 = 0.919062526848883233846823727522;  // 30-digit reference value

double pdf_integral(std::uint64_t c, std::uint64_t d) {
  const BetaParams p{c, d};
  const double cd = double(c), dd = double(d);
  const double mean = cd / (cd + dd);
  const double sd = std::sqrt(cd * dd / ((cd + dd) * (cd + dd) * (cd + dd + 1.0)));
  std::vector<double> cuts;
  for (double k : {-40.0, -20.0, -10.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0, 40.0}) cuts.push_back(mean + k * sd);
  return detail::integrate_split([&](double t) { return beta_pdf(p, t); }, 0.0, 1.0, cuts);
}

// E[((X - c)^+)^a] for X ~ Beta(1, n):  n (1-c)^(a+n) B(a+1, n).
double first_order_upper_moment(std::uint64_t n, double a, double c) {
  if (c >= 1.0) return 0.0;
  const double nd = double(n);
  return std::exp(std::log(nd) + (a + nd) * std::log1p(-c) + std::lgamma(a + 1.0) + std::lgamma(nd) -
                  std::lgamma(a + 1.0 + nd));
}

// E[((c - X)^+)^a] for X ~ Beta(n, 1):  n c^(a+n) B(a+1, n).
double last_order_lower_moment(std::uint64_t n, double a, double c) {
  const double nd = double(n);
  return std::exp(std::log(nd) + (a + nd) * std::log(c) + std::lgamma(a + 1.0) + std::lgamma(nd) -
                  std::lgamma(a + 1.0 + nd));
}

}  // namespace

// --- gamma ---------------------------------------------------------------------

TEST(Gamma, Factorials) {
  double fact = 1.0;
  for (int k = 1; k <= 40; ++k) {
    EXPECT_NEAR(gamma_fn(k), fact, 1e-10 * fact) << k;
    fact *= k;
  }
  EXPECT_EQ(gamma_fn(2.0), 1.0);
}

TEST(Gamma, HalfIntegers) {
  // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
  double v = std::sqrt(kPi);
  for (int k = 0; k < 30; ++k) {
    EXPECT_NEAR(gamma_fn(k + 0.5), v, 1e-10 * v) << k;
    v *= (k + 0.5);
  }
  EXPECT_NEAR(gamma_fn(1.5), std::sqrt(kPi) / 2.0, 1e-15);
}

TEST(Gamma, SevenQuarters) { EXPECT_NEAR(gamma_fn(1.75), kGamma7over4, 1e-15); }

TEST(Gamma, Domain) {
  EXPECT_THROW(gamma_fn(0.0), std::invalid_argument);
  EXPECT_THROW(gamma_fn(-1.5), std::invalid_argument);
  EXPECT_THROW(gamma_fn(50.5), std::invalid_argument);
  EXPECT_NO_THROW(gamma_fn(50.0));
}

TEST(LogGamma, AgreesWithGammaAndBinomials) {
  for (double x : {0.3, 1.0, 2.5, 17.0, 49.0}) EXPECT_NEAR(log_gamma(x), std::log(gamma_fn(x)), 1e-12);
  EXPECT_NEAR(std::exp(log_binomial(10, 3)), 120.0, 1e-11);
  EXPECT_NEAR(std::exp(log_binomial(52, 5)), 2598960.0, 1e-6);
}

// --- beta density ---------------------------------------------------------------

TEST(BetaPdf, UniformCase) {
  for (double t : {0.0, 0.1, 0.5, 1.0}) EXPECT_NEAR(beta_pdf({1, 1}, t), 1.0, 1e-15);
}

TEST(BetaPdf, FirstOrderStatistic) {
  for (std::uint64_t n : {1u, 2u, 10u, 1000u})
    for (double t : {0.0, 0.01, 0.3, 0.9}) {
      const double expected = double(n) * std::pow(1.0 - t, double(n) - 1.0);
      EXPECT_NEAR(beta_pdf({1, n}, t), expected, 1e-12 * std::max(1.0, expected));
    }
}

TEST(BetaPdf, RationalOracle) {
  // f_{3,7}(3/10) = 3 * C(9,3) * (3/10)^2 * (7/10)^6 = 266827932 / 10^8.
  const std::int64_t numer = 3LL * 84 * 9 * 117649;
  EXPECT_EQ(numer, 266827932LL);
  EXPECT_NEAR(beta_pdf({3, 7}, 0.3), double(numer) / 1e8, 1e-14);
}

TEST(BetaPdf, NoOverflowForLargeParameters) {
  const double v = beta_pdf({500000, 500000}, 0.5);
  EXPECT_TRUE(std::isfinite(v));
  // Normal approximation: variance 1 / (4 (2m + 1)) at the mode.
  EXPECT_NEAR(v, std::sqrt(2.0 * 1000001.0 / kPi), 1e-3 * v);
}

TEST(BetaPdf, NormalizationGrid) {
  for (std::uint64_t c : {1u, 2u, 3u, 10u, 99u, 1000u, 5000u, 9999u})
    for (std::uint64_t d : {1u, 2u, 7u, 64u, 500u, 5000u}) {
      if (c + d > 10000) continue;
      EXPECT_NEAR(pdf_integral(c, d), 1.0, 1e-8) << c << "," << d;
    }
}

TEST(BetaPdf, RejectsBadInput) {
  EXPECT_THROW(beta_pdf({0, 1}, 0.5), std::invalid_argument);
  EXPECT_THROW(beta_pdf({1, 1}, 1.5), std::invalid_argument);
}

// --- incomplete beta ------------------------------------------------------------

TEST(IncompleteBeta, PowerCase) {
  for (std::uint64_t n : {1u, 3u, 20u})
    for (double z : {0.1, 0.5, 0.93}) EXPECT_NEAR(incomplete_beta({n, 1}, z), std::pow(z, double(n)), 1e-14);
}

TEST(IncompleteBeta, Endpoints) {
  EXPECT_EQ(incomplete_beta({4, 6}, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta({4, 6}, 1.0), 1.0);
}

TEST(IncompleteBeta, RationalOracle) {
  // I_{0.4}(3,5) = 1 - sum_{j<3} C(7,j) 0.4^j 0.6^(7-j) = 1 - 0.419904.
  EXPECT_NEAR(incomplete_beta({3, 5}, 0.4), 0.580096, 1e-14);
  EXPECT_NEAR(1.0 - binomial_lower_sum({3, 5}, 0.4), 0.580096, 1e-14);
}

TEST(IncompleteBeta, BinomialIdentityGrid) {
  for (std::uint64_t c : {1u, 2u, 5u, 17u, 300u, 2000u, 5000u})
    for (std::uint64_t d : {1u, 3u, 40u, 999u, 5000u})
      for (double z : {1e-4, 0.01, 0.2, 0.5, 0.8, 0.999}) {
        if (c + d - 1 > 10000) continue;
        EXPECT_NEAR(1.0 - incomplete_beta({c, d}, z), binomial_lower_sum({c, d}, z), 1e-10)
            << c << "," << d << "," << z;
      }
}

// --- positive-part moments ------------------------------------------------------

TEST(PositivePartMoment, VanishesBeyondOne) {
  EXPECT_EQ(positive_part_moment({10, 10, 1.0, 0.1, MomentKind::upper}), 0.0);
  EXPECT_EQ(positive_part_moment({10, 10, 2.0, 0.2, MomentKind::upper}), 0.0);
  // Below the cap it is positive and at most (1 - rho l)^a.
  const double v = positive_part_moment({9, 10, 1.0, 0.1, MomentKind::upper});
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, 0.1);
}

TEST(PositivePartMoment, LowerWithZeroRate) {
  EXPECT_EQ(positive_part_moment({3, 10, 1.0, 0.0, MomentKind::lower}), 0.0);
}

TEST(PositivePartMoment, ClosedFormAtExtremeOrderStatistics) {
  for (std::uint64_t n : {1u, 10u, 100u, 10000u})
    for (double a : {0.5, 1.0, 1.5, 2.0, 4.0}) {
      const double nd = double(n);
      const double up = positive_part_moment({1, n, a, 1.5 / nd, MomentKind::upper});
      const double up_ref = first_order_upper_moment(n, a, 1.5 / nd);
      EXPECT_NEAR(up, up_ref, 1e-8 * up_ref) << n << " " << a;
      if (n > 1) {
        const double lo = positive_part_moment({n, n, a, 0.995 / nd, MomentKind::lower});
        const double lo_ref = last_order_lower_moment(n, a, 0.995);
        EXPECT_NEAR(lo, lo_ref, 1e-8 * lo_ref) << n << " " << a;
      }
    }
}

TEST(PositivePartMoment, MonteCarloCrossCheck) {
  constexpr std::size_t draws = 1000000;
  const double c = 1.5 / 100.0;
  SplitMix64 rng(SeedSpec{55, 0});
  std::vector<double> scratch;
  double sum = 0.0, sq = 0.0;
  for (std::size_t t = 0; t < draws; ++t) {
    const double v = std::max(beta_order_statistic_sample(1, 100, rng, scratch) - c, 0.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  EXPECT_NEAR(positive_part_moment({1, 100, 1.0, c, MomentKind::upper}), mean, 4.0 * se);
}

TEST(PositivePartMoment, RejectsBadQuery) {
  EXPECT_THROW(positive_part_moment({0, 5, 1.0, 0.1, MomentKind::upper}), std::invalid_argument);
  EXPECT_THROW(positive_part_moment({6, 5, 1.0, 0.1, MomentKind::upper}), std::invalid_argument);
  EXPECT_THROW(positive_part_moment({1, 5, 0.0, 0.1, MomentKind::upper}), std::invalid_argument);
}

TEST(LemmaSum, SingleTerm) {
  EXPECT_EQ(lemma_sum_bound(1, 1.0, 0.3, MomentKind::upper), positive_part_moment({1, 1, 1.0, 0.3, MomentKind::upper}));
}

TEST(LemmaSum, ZeroLowerRate) { EXPECT_EQ(lemma_sum_bound(50, 2.0, 0.0, MomentKind::lower), 0.0); }

TEST(LemmaSum, BoundedAcrossTenfoldN) {
  const double small = lemma_sum_bound(100, 1.0, 1.5 / 100.0, MomentKind::upper);
  const double large = lemma_sum_bound(1000, 1.0, 1.5 / 1000.0, MomentKind::upper);
  EXPECT_GT(small, 0.0);
  EXPECT_LT(std::max(small, large) / std::min(small, large), 2.0);
}

// --- inequalities ---------------------------------------------------------------

TEST(LemmaFirst, Examples) {
  EXPECT_TRUE(verify_lemma_first(100, 1.0));
  EXPECT_TRUE(verify_lemma_first(10, 2.0));
}

TEST(LemmaFirst, FullGrid) {
  for (double a : {0.5, 1.0, 2.0, 4.0})
    for (std::uint64_t n = 2; n <= 10000; ++n) ASSERT_TRUE(verify_lemma_first(n, a)) << n << " " << a;
}

TEST(Prohorov, ZeroProbability) {
  for (std::uint64_t n : {1u, 5u, 100u}) {
    EXPECT_TRUE(verify_prohorov(n, 0, 0.0));
    EXPECT_TRUE(verify_prohorov(n, 1, 0.0));
  }
}

TEST(Prohorov, DirectEvaluation) {
  // n = 100, j = 3, x = 0.02, m1 = 98; both sides computed directly.
  const long double lhs = 161700.0L * std::pow(0.02L, 3) * std::pow(0.98L, 97);
  const long double rhs = std::sqrt(100.0L / 98.0L) * std::exp(-2.0L) * 8.0L / 6.0L;
  const ProhorovSides s = prohorov_sides(100, 3, 0.02);
  EXPECT_NEAR(s.log_lhs, double(std::log(lhs)), 1e-12);
  EXPECT_NEAR(s.log_rhs, double(std::log(rhs)), 1e-12);
  EXPECT_TRUE(s.holds);
}

TEST(Prohorov, RandomAdmissibleTriples) {
  SplitMix64 rng(SeedSpec{77, 0});
  std::size_t checked = 0;
  while (checked < 10000) {
    const std::uint64_t n = 1 + rng.below(5000);
    const double x = rng.uniform();
    const std::uint64_t j = rng.below(n + 1);
    if (double(n) * (1.0 - x) < 1.0) continue;
    ASSERT_TRUE(verify_prohorov(n, j, x)) << n << " " << j << " " << x;
    ++checked;
  }
}

TEST(Prohorov, SmallNExhaustive) {
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (std::uint64_t j = 0; j <= n; ++j)
      for (int k = 0; k < 200; ++k) {
        const double x = k / 200.0;
        if (double(n) * (1.0 - x) < 1.0) continue;
        ASSERT_TRUE(verify_prohorov(n, j, x)) << n << " " << j << " " << x;
      }
}

TEST(Prohorov, RejectsInadmissible) {
  EXPECT_THROW(verify_prohorov(10, 11, 0.1), std::invalid_argument);
  EXPECT_THROW(verify_prohorov(10, 1, 0.95), std::invalid_argument);
  EXPECT_THROW(verify_prohorov(10, 1, 1.0), std::invalid_argument);
}

// --- series identity ------------------------------------------------------------

TEST(SeriesIdentity, Coefficients) {
  // (-1)^k k! / ((2k)! 2^k (1 + 2k))
  EXPECT_EQ(anchor_series_coefficient(0), 1.0);
  EXPECT_NEAR(anchor_series_coefficient(1), -1.0 / 12.0, 1e-17);
  EXPECT_NEAR(anchor_series_coefficient(2), 2.0 / (24.0 * 4.0 * 5.0), 1e-17);
  EXPECT_NEAR(anchor_series_coefficient(3), -6.0 / (720.0 * 8.0 * 7.0), 1e-18);
}

TEST(SeriesIdentity, AgreesAtDocumentedExponents) {
  for (double a : {1.0, 2.5, 0.5}) {
    const SeriesIdentityCheck c = verify_series_integral_identity(a);
    EXPECT_TRUE(c.ok) << a << " rel " << c.relative_error;
  }
}

TEST(SeriesIdentity, FrozenHighPrecisionValues) {
  // Closed-form values from a 30-digit evaluation.
  const std::vector<std::pair<double, double>> ref{{0.5, -1.2736856619393484726},
                                                   {1.0, -0.49217531080382561701},
                                                   {1.5, -0.36528448675542497994},
                                                   {2.5, 0.090977547281382033758},
                                                   {3.3, 0.021910306799777747912}};
  for (auto [a, v] : ref) {
    EXPECT_NEAR(series_integral_closed_form(a), v, 1e-13 * std::abs(v)) << a;
    const SeriesIdentityCheck c = verify_series_integral_identity(a);
    EXPECT_NEAR(c.series_side, v, 1e-8 * std::abs(v)) << a;
  }
}

TEST(SeriesIdentity, ReflectionFormMatchesLiteralAwayFromOddIntegers) {
  for (double a : {0.5, 1.5, 2.5, 3.3, 5.7}) {
    const double lit = series_integral_closed_form_literal(a);
    EXPECT_NEAR(series_integral_closed_form(a), lit, 1e-12 * std::abs(lit)) << a;
  }
}

TEST(SeriesIdentity, RejectsEvenExponents) {
  EXPECT_THROW(verify_series_integral_identity(2.0), std::invalid_argument);
  EXPECT_THROW(verify_series_integral_identity(4.0005), std::invalid_argument);
  EXPECT_THROW(verify_series_integral_identity(0.0), std::invalid_argument);
}
