#include <gtest/gtest.h>

#include <cmath>

#include "divcert/primitivity.hpp"

using namespace divcert;

TEST(ExcludeN2, Examples) {
  EXPECT_TRUE(exclude_n2(1, 2));
  EXPECT_TRUE(exclude_n2(2, 5));
  EXPECT_FALSE(exclude_n2(2, 3));  // 16 + 9 = 25
}

TEST(CertifyPrimitive, Examples) {
  const auto c12 = certify_primitive(1, 2);
  EXPECT_TRUE(c12.verdict);
  EXPECT_TRUE(c12.ratio_ok);
  EXPECT_LT(c12.ratio_hi, 9.0);
  // evaluated with the branch for -5 = 11 mod 16 (5/16 log 2)
  const double expected = (0.25 * std::log(5.0) + 2.03781) / (std::log(5.0) / 16 + 5.0 / 16 * std::log(2.0));
  EXPECT_NEAR(c12.ratio_hi, expected, 1e-9);
  EXPECT_GE(c12.ratio_hi, expected);

  const auto c25 = certify_primitive(2, 5);
  EXPECT_TRUE(c25.verdict);
  const double e25 = (0.25 * std::log(41.0) + std::log(2.0) + 2.03781) / (std::log(41.0) / 16 + 9.0 / 16 * std::log(2.0));
  EXPECT_NEAR(c25.ratio_hi, e25, 1e-9);

  const auto c11 = certify_primitive(1, 1);
  EXPECT_TRUE(c11.verdict);
  ASSERT_TRUE(c11.special_case.has_value());
  EXPECT_TRUE(c11.special_case->certified);
  EXPECT_EQ(c11.special_case->descent_rank_upper, 1);
  EXPECT_GT(c11.special_case->points_examined, 0);
}

TEST(CertifyPrimitive, Preconditions) {
  try {
    certify_primitive(2, 3);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.reason(), "l not a square");
  }
  try {
    certify_primitive(2, 4);  // 32
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.reason(), "l fourth-power-free");
  }
  EXPECT_THROW(certify_primitive(0, 3), PreconditionError);
}

TEST(CertifyPrimitive, RoundingIsOutward) {
  for (long s = 1; s <= 20; ++s)
    for (long t = 1; t <= 20; ++t) {
      const long l = s * s * s * s + t * t;
      if (!kth_power_free(Int(l), 4) || is_square(Int(l))) continue;
      const auto c = certify_primitive(s, t);
      const long double L = std::log(static_cast<long double>(l));
      const long double num = L / 4 + std::log(static_cast<long double>(s)) + 2.03781L;
      const long double den = L / 16 + vy_log2_coefficient(Int(-l)) * std::log(2.0L);
      EXPECT_GE(static_cast<long double>(c.ratio_hi), num / den) << s << "," << t;
    }
}

TEST(SmallHeightPoints, FindsKnownPoints) {
  const Curve c = make_family(1, 2);
  long examined = 0;
  const auto pts = small_height_points(c, Int(30), &examined);
  EXPECT_GT(examined, 0);
  bool found = false;
  for (const auto& q : pts) found = found || q == family_point(c);
  EXPECT_TRUE(found);
  for (const auto& q : pts) EXPECT_FALSE(q == c.point(Rat(0), Rat(0)));
}
