#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "divcert/localcond.hpp"

using namespace divcert;

TEST(CheckLocal, Examples) {
  const auto a = check_local(1, 50, 5, 1);
  EXPECT_EQ(a.v_st, 2);
  EXPECT_EQ(a.v_x2P, -4);
  EXPECT_EQ(a.v_y2P, -6);
  EXPECT_EQ(a.v_z2P, 2);
  EXPECT_TRUE(a.verdict);
  EXPECT_TRUE(a.x_not_integral);
  EXPECT_EQ(a.f0, 2);
  EXPECT_TRUE(a.point_count_checked);

  const auto b = check_local(2, 25, 5, 1);
  EXPECT_EQ(b.v_st, 2);
  EXPECT_TRUE(b.verdict);

  try {
    check_local(1, 2, 5, 1);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.reason(), "p divides exactly one of s,t");
  }
  try {
    check_local(1, 5, 5, 1);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.reason(), "st mod p^{n+1}");
  }
  EXPECT_THROW(check_local(1, 50, 2, 1), PreconditionError);
  EXPECT_THROW(check_local(1, 50, 5, 0), PreconditionError);
  EXPECT_THROW(check_local(5, 50, 5, 1), PreconditionError);
}

TEST(CheckLocal, VerdictTracksN) {
  // v_5(st) = 3 for (1, 125): holds for n <= 2, fails the st mod p^{n+1} precondition beyond.
  EXPECT_TRUE(check_local(1, 125, 5, 1).verdict);
  EXPECT_TRUE(check_local(1, 125, 5, 2).verdict);
  EXPECT_THROW(check_local(1, 125, 5, 3), PreconditionError);
}

TEST(FormalZ, Examples) {
  const Curve c(Int(-5));
  EXPECT_EQ(formal_z(c, c.point(make_rat(9, 4), make_rat(-3, 8))), 6);
  EXPECT_THROW(formal_z(c, c.point(Rat(0), Rat(0))), ArgumentError);
  const auto lc = check_local(1, 50, 5, 1);
  EXPECT_EQ(vp(formal_z(make_family(1, 50), lc.two_p), 5).value(), 2);
}

TEST(CheckLocal, RandomValuationIdentities) {
  std::mt19937_64 rng(2024);
  const long primes[] = {3, 5, 7, 11, 13};
  int done = 0;
  while (done < 300) {
    const long p = primes[rng() % 5];
    long s = 1 + static_cast<long>(rng() % 400), t = 1 + static_cast<long>(rng() % 400);
    if (rng() % 2)
      s *= p * p;
    else
      t *= p * p;
    if (std::gcd(s, t) != 1) continue;
    const auto lc = check_local(s, t, p, 1);
    ++done;
    EXPECT_EQ(lc.v_x2P, -2 * lc.v_st);
    EXPECT_EQ(lc.v_y2P, -3 * lc.v_st);
    EXPECT_EQ(lc.v_z2P, lc.v_st);
    EXPECT_TRUE(lc.closed_form_match);
    const Int l = Int(s) * s * s * s + Int(t) * t;
    EXPECT_EQ(lc.good_at_p, mpz_fdiv_ui(Int(2 * l).get_mpz_t(), p) != 0);
    EXPECT_EQ(lc.verdict, lc.good_at_p);
    if (lc.good_at_p) EXPECT_TRUE(lc.parity_ok);
  }
}

TEST(ClosedForm, Matches) {
  EXPECT_EQ(closed_form_x2P(1, 2), make_rat(9, 4));  // ((2 + 4)/4)^2
}
