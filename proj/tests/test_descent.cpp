#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "divcert/descent.hpp"
#include "oracles.hpp"

using namespace divcert;

namespace {

bool has(const std::vector<Int>& v, long d) { return std::find(v.begin(), v.end(), Int(d)) != v.end(); }

}  // namespace

TEST(Isogeny, Examples) {
  const Curve c(Int(-5));
  const CurvePoint img = isogeny_phi(c, c.point(Rat(-1), Rat(2)));
  EXPECT_EQ(img, CurvePoint::affine(Rat(4), Rat(-12)));
  EXPECT_TRUE(Curve(Int(20)).contains(img));
  EXPECT_TRUE(isogeny_phi(c, c.point(Rat(0), Rat(0))).is_infinity());
  EXPECT_TRUE(isogeny_phi(c, CurvePoint::infinity()).is_infinity());
}

TEST(Isogeny, IsAHomomorphism) {
  const Curve c = make_family(2, 5);
  const Curve target(Int(-4) * c.a());
  const CurvePoint P = family_point(c);
  const CurvePoint Q = c.dbl(P);
  EXPECT_EQ(isogeny_phi(c, c.add(P, Q)), target.add(isogeny_phi(c, P), isogeny_phi(c, Q)));
  EXPECT_EQ(isogeny_phi(c, c.translate_by_T(P)), isogeny_phi(c, P));
}

TEST(Torsor, Normalization) {
  const Torsor t = make_torsor(IsogenySide::Phi, Int(2), Int(17));
  EXPECT_EQ(t.alpha, 2);
  EXPECT_EQ(t.beta, 34);
  const Torsor h = make_torsor(IsogenySide::PhiHat, Int(-17), Int(17));
  EXPECT_EQ(h.alpha, -17);
  EXPECT_EQ(h.beta, 16);
  EXPECT_THROW(make_torsor(IsogenySide::Phi, Int(3), Int(17)), ArgumentError);
  EXPECT_THROW(make_torsor(IsogenySide::Phi, Int(1), Int(15)), ArgumentError);
  EXPECT_THROW(make_torsor(IsogenySide::Phi, Int(17), Int(2)), ArgumentError);
}

TEST(LocallySoluble, Examples) {
  EXPECT_FALSE(locally_soluble(make_torsor(IsogenySide::Phi, Int(-1), Int(5)), Place::real()));
  EXPECT_FALSE(locally_soluble(make_torsor(IsogenySide::Phi, Int(2), Int(5)), Place::at(2)));
  EXPECT_FALSE(locally_soluble(make_torsor(IsogenySide::PhiHat, Int(-1), Int(13)), Place::at(2)));
  for (long p : {2L, 3L, 5L, 7L})
    EXPECT_TRUE(locally_soluble(make_torsor(IsogenySide::PhiHat, Int(-1), Int(2)), Place::at(p)));
}

TEST(LocallySoluble, ClosedFormMatchesRefinement) {
  // odd places, including the bad place l itself
  const auto primes = oracle::sieve(200);
  for (long l = 2; l <= 200; ++l) {
    if (!primes[l]) continue;
    for (IsogenySide side : {IsogenySide::Phi, IsogenySide::PhiHat})
      for (const Int& d : descent_classes(Int(l))) {
        const Torsor t = make_torsor(side, d, Int(l));
        for (long p : {3L, 5L, 7L, 11L, 13L, l}) {
          if (p == 2) continue;
          ASSERT_EQ(locally_soluble(t, Place::at(p)), locally_soluble_by_refinement(t, Int(p)))
              << "l=" << l << " d=" << d << " side=" << to_string(side) << " p=" << p;
        }
      }
  }
}

TEST(LocallySoluble, ScalingInvariance) {
  // (u, v, w) -> (p u, v, p^2 w) turns alpha into alpha p^4; (u, v, w) -> (u, v, p w) divides both by p^2.
  for (long l : {5L, 13L, 17L, 41L})
    for (long p : {2L, 3L, 5L, l}) {
      for (const Int& d : descent_classes(Int(l))) {
        const Torsor t = make_torsor(IsogenySide::Phi, d, Int(l));
        Torsor scaled = t;
        scaled.alpha *= p * p * p * p;
        Torsor both = t;
        both.alpha *= p * p;
        both.beta *= p * p;
        const bool base = locally_soluble(t, Place::at(p));
        EXPECT_EQ(locally_soluble_by_refinement(scaled, Int(p)), base);
        EXPECT_EQ(locally_soluble_by_refinement(both, Int(p)), base);
        EXPECT_EQ(locally_soluble(scaled, Place::at(p)), base);
      }
    }
}

TEST(LocallySoluble, RandomGoodOddPrimes) {
  std::mt19937_64 rng(5);
  const auto primes = oracle::sieve(5000);
  for (long l = 3; l <= 400; ++l) {
    if (!primes[l]) continue;
    int picked = 0;
    while (picked < 3) {
      const long p = 3 + static_cast<long>(rng() % 4990);
      if (!primes[p] || p == l) continue;
      ++picked;
      for (IsogenySide side : {IsogenySide::Phi, IsogenySide::PhiHat})
        for (const Int& d : descent_classes(Int(l)))
          EXPECT_TRUE(locally_soluble(make_torsor(side, d, Int(l)), Place::at(p))) << l << " " << p;
    }
  }
}

TEST(SearchTorsorPoint, Examples) {
  for (long l : {2L, 5L, 13L, 41L, 97L}) {
    const auto a = search_torsor_point(make_torsor(IsogenySide::Phi, Int(l), Int(l)), Int(3));
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->u, 0);
    EXPECT_EQ(a->v, 1);
    EXPECT_EQ(a->w, 2);
    const auto b = search_torsor_point(make_torsor(IsogenySide::PhiHat, Int(-l), Int(l)), Int(3));
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->w, 4);
  }
  const auto c = search_torsor_point(make_torsor(IsogenySide::PhiHat, Int(-1), Int(2)), Int(3));
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->u, 2);
  EXPECT_EQ(c->v, 1);
  EXPECT_EQ(c->w, 4);
  EXPECT_FALSE(search_torsor_point(make_torsor(IsogenySide::Phi, Int(-1), Int(5)), Int(20)).has_value());
  EXPECT_THROW(search_torsor_point(make_torsor(IsogenySide::Phi, Int(1), Int(5)), Int(0)), ArgumentError);
}

TEST(SearchTorsorPoint, GlobalWitnessesAreLocallySoluble) {
  const auto primes = oracle::sieve(300);
  for (long l = 2; l <= 300; ++l) {
    if (!primes[l]) continue;
    for (IsogenySide side : {IsogenySide::Phi, IsogenySide::PhiHat})
      for (const Int& d : descent_classes(Int(l))) {
        const Torsor t = make_torsor(side, d, Int(l));
        const auto w = search_torsor_point(t, Int(6));
        if (!w) continue;
        const Int u2 = w->u * w->u, v2 = w->v * w->v;
        EXPECT_EQ(w->w * w->w, t.alpha * u2 * u2 + t.beta * v2 * v2);
        EXPECT_TRUE(locally_soluble(t, Place::real()));
        for (long p : {2L, 3L, 5L, 7L, l}) EXPECT_TRUE(locally_soluble(t, Place::at(p))) << l << " d=" << d << " p=" << p;
      }
  }
}

TEST(Selmer, Examples) {
  const auto r5 = selmer(Int(5));
  EXPECT_EQ(r5.sel_phi, (std::vector<Int>{1, 5}));
  EXPECT_EQ(r5.dim_phi, 1);
  EXPECT_EQ(r5.dim_phihat, 2);
  EXPECT_TRUE(has(r5.sel_phihat, -1) && has(r5.sel_phihat, 5) && has(r5.sel_phihat, -5));
  EXPECT_EQ(r5.rank_upper, 1);
  EXPECT_EQ(selmer(Int(3)).rank_upper, 0);
  EXPECT_EQ(selmer(Int(17)).rank_upper, 2);
  EXPECT_EQ(selmer(Int(2)).rank_upper, 1);
  EXPECT_THROW(selmer(Int(15)), ArgumentError);
}

TEST(Selmer, SubgroupStructure) {
  const auto primes = oracle::sieve(1000);
  for (long l = 2; l <= 1000; ++l) {
    if (!primes[l]) continue;
    const auto r = selmer(Int(l));
    EXPECT_TRUE(has(r.sel_phi, 1) && has(r.sel_phi, l));
    EXPECT_TRUE(has(r.sel_phihat, 1) && has(r.sel_phihat, -l));
    for (const auto* sel : {&r.sel_phi, &r.sel_phihat})
      for (const Int& a : *sel)
        for (const Int& b : *sel) EXPECT_TRUE(has(*sel, square_class_product(a, b, Int(l)).get_si()));
    EXPECT_EQ(r.rank_upper, r.dim_phi + r.dim_phihat - 2);
  }
}

TEST(TableBound, Examples) {
  EXPECT_EQ(theorem_table_bound(Int(41)), 1);
  EXPECT_EQ(theorem_table_bound(Int(13)), 0);
  EXPECT_EQ(theorem_table_bound(Int(97)), 2);
  EXPECT_EQ(theorem_table_bound(Int(2)), 1);
}

TEST(RankOne, Examples) {
  const auto r = certify_rank_one(2, 5);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.l, 41);
  EXPECT_EQ(r.selmer_rank_upper, 1);
  EXPECT_EQ(r.witness, CurvePoint::affine(Rat(-4), Rat(10)));
  try {
    certify_rank_one(2, 3);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.reason(), "l prime");
  }
  const auto big = certify_rank_one(2, 75);
  EXPECT_EQ(big.l, 5641);
  EXPECT_TRUE(big.verdict);
  EXPECT_THROW(certify_rank_one(1, 2), PreconditionError);
  EXPECT_THROW(certify_rank_one(2, 7), PreconditionError);
}
