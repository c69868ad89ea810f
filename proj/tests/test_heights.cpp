#include <gtest/gtest.h>

#include <cmath>

#include "divcert/heights.hpp"

using namespace divcert;

TEST(NaiveHeight, Examples) {
  const Curve c(Int(-5));
  EXPECT_EQ(naive_height(c.point(Rat(-1), Rat(2))), 0.0);
  EXPECT_NEAR(naive_height(c.point(make_rat(9, 4), make_rat(-3, 8))), std::log(9.0), 1e-14);
  EXPECT_EQ(naive_height(CurvePoint::infinity()), 0.0);
  for (long s = 1; s <= 9; ++s) {
    const Curve e = make_family(s, 3);
    EXPECT_NEAR(naive_height(family_point(e)), std::log(static_cast<double>(s * s)), 1e-14);
  }
}

TEST(SilvermanGaps, Constants) {
  const double upper_a1 = (std::log(1728.0) + std::log(64.0)) / 12 + 1.07;
  const auto g1 = silverman_gaps(Curve(Int(-1)));
  EXPECT_TRUE(g1.upper_gap.contains(upper_a1));
  EXPECT_NEAR(upper_a1, kFamilyUpperGapConstant, 1e-4);
  for (auto [s, t] : {std::pair{1L, 2L}, {2L, 5L}, {20L, 19L}, {1L, 50L}}) {
    const Curve c = make_family(s, t);
    const double l = static_cast<double>(s * s * s * s + t * t);
    const auto g = silverman_gaps(c);
    EXPECT_NEAR(g.upper_gap.mid(), 0.25 * std::log(l) + 2.03781, 1e-4);
    EXPECT_NEAR(g.lower_gap.mid(), std::log(1728.0) / 8 + (std::log(64.0) + 3 * std::log(l)) / 12 + 0.973, 1e-12);
    EXPECT_GT(g.lower_gap.lo, 0.0);
    EXPECT_GT(g.upper_gap.lo, 0.0);
  }
}

TEST(CanonicalHeight, NestingAndWidth) {
  const Curve c(Int(-5));
  const CurvePoint P = c.point(Rat(-1), Rat(2));
  const auto g = silverman_gaps(c);
  HeightInterval prev = canonical_height(c, P, 1);
  for (int k = 2; k <= 8; ++k) {
    const HeightInterval cur = canonical_height(c, P, k);
    EXPECT_GE(cur.lo, prev.lo - 1e-12) << k;
    EXPECT_LE(cur.hi, prev.hi + 1e-12) << k;
    EXPECT_NEAR(cur.width(), (g.lower_gap.mid() + g.upper_gap.mid()) / std::ldexp(1.0, 2 * k), 1e-12);
    prev = cur;
  }
  const HeightInterval k5 = canonical_height(c, P, 5), k8 = canonical_height(c, P, 8);
  EXPECT_LE(k5.lo, k8.lo);
  EXPECT_GE(k5.hi, k8.hi);
}

TEST(CanonicalHeight, Errors) {
  const Curve c(Int(-5));
  EXPECT_THROW(canonical_height(c, c.point(Rat(0), Rat(0))), ArgumentError);
  EXPECT_THROW(canonical_height(c, c.point(Rat(-1), Rat(2)), 0), ArgumentError);
  EXPECT_THROW(canonical_height(c, CurvePoint::affine(Rat(1), Rat(1))), ArgumentError);
}

TEST(CanonicalHeight, QuadraticityAndSilvermanMembership) {
  for (auto [s, t] : {std::pair{1L, 2L}, {2L, 5L}, {3L, 7L}}) {
    const Curve c = make_family(s, t);
    const CurvePoint P = family_point(c);
    const auto g = silverman_gaps(c);
    for (int k = 3; k <= 6; ++k) {
      const HeightInterval hp = canonical_height(c, P, k);
      const HeightInterval h2p = canonical_height(c, c.dbl(P), k);
      EXPECT_TRUE(h2p.as_interval().overlaps(scale(hp.as_interval(), 4.0)));
      // hhat(P) - h(P)/2 lies within [-lower_gap, upper_gap]
      const double half = naive_height(P) / 2;
      EXPECT_LE(hp.lo, half + g.upper_gap.hi);
      EXPECT_GE(hp.hi, half - g.lower_gap.hi);
    }
  }
}

TEST(VoutierYabuta, TableRows) {
  const double ln2 = std::log(2.0);
  EXPECT_NEAR(vy_lower_bound(Int(-41)), std::log(41.0) / 16 + 9.0 / 16 * ln2, 1e-12);
  EXPECT_NEAR(vy_lower_bound(Int(-11)), std::log(11.0) / 16 + 9.0 / 16 * ln2, 1e-12);
  EXPECT_NEAR(vy_lower_bound(Int(20)), std::log(20.0) / 16 + 0.25 * ln2, 1e-12);
  EXPECT_EQ(vy_log2_coefficient(Int(-5)), 5.0 / 16);   // -5 = 11 mod 16
  EXPECT_EQ(vy_log2_coefficient(Int(3)), 0.25);
  EXPECT_EQ(vy_log2_coefficient(Int(4)), -1.0 / 8);
  EXPECT_EQ(vy_log2_coefficient(Int(-12)), -1.0 / 16);  // -12 = 52 mod 64
  EXPECT_EQ(vy_log2_coefficient(Int(1)), 0.5);
  EXPECT_THROW(vy_lower_bound(Int(32)), ArgumentError);
  EXPECT_THROW(vy_lower_bound(Int(0)), ArgumentError);
  // outward: the returned value never exceeds the exact expression
  EXPECT_LE(vy_lower_bound(Int(-41)), std::log(41.0L) / 16 + 9.0L / 16 * std::log(2.0L));
}

TEST(VoutierYabuta, BelowGeneratorHeights) {
  // P_{s,t} for these small pairs are certified primitive; VY bounds every non-torsion point.
  for (auto [s, t] : {std::pair{1L, 2L}, {2L, 5L}, {1L, 4L}, {2L, 3L}, {3L, 2L}}) {
    const Curve c = make_family(s, t);
    if (!kth_power_free(-c.a(), 4)) continue;
    EXPECT_LT(vy_lower_bound(c.a()), canonical_height(c, family_point(c), 6).hi) << s << "," << t;
  }
}
