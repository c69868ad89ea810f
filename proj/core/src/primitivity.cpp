#include "divcert/primitivity.hpp"

#include <cmath>
#include <limits>

#include "divcert/descent.hpp"

namespace divcert {

bool exclude_n2(const Int& s, const Int& t) {
  const Int s2 = s * s;
  const Int l = s2 * s2 + t * t;
  // 2Q = P forces -s^2 to be a square; 2Q = P + (0,0) forces l/s^2 to be one.
  return !is_square(Rat(-s2)) && !is_square(make_rat(l, s2));
}

std::vector<CurvePoint> small_height_points(const Curve& c, const Int& bound, long* examined) {
  // x = n/e^2 in lowest terms; max(|n|, e^2) <= bound.
  std::vector<CurvePoint> out;
  const TorsionInfo tors = torsion(c);
  long count = 0;
  for (Int e = 1; e * e <= bound; ++e) {
    const Int e2 = e * e, e4 = e2 * e2;
    for (Int n = -bound; n <= bound; ++n) {
      Int g;
      mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), e.get_mpz_t());
      if (g != 1) continue;
      ++count;
      const Int rhs = n * (n * n + c.a() * e4);
      if (!is_square(rhs)) continue;
      const Rat x = make_rat(n, e2);
      const Rat y = make_rat(isqrt(rhs), e2 * e);
      for (const Rat& yy : {y, Rat(-y)}) {
        CurvePoint q = c.point(x, yy);
        if (!tors.contains(q)) out.push_back(q);
        if (y == 0) break;
      }
    }
  }
  if (examined) *examined = count;
  return out;
}

namespace {

long double widen_up(long double v) {
  for (int i = 0; i < 8; ++i) v = std::nextafter(v, std::numeric_limits<long double>::infinity());
  return v;
}
long double widen_down(long double v) {
  for (int i = 0; i < 8; ++i) v = std::nextafter(v, -std::numeric_limits<long double>::infinity());
  return v;
}

// Extended-precision upper bound for the ratio, used only near the margin.
double ratio_hi_extended(const Int& s, const Int& l, double vy_coeff) {
  const long double log_l = std::log(static_cast<long double>(l.get_d()));
  const long double log_s = std::log(static_cast<long double>(s.get_d()));
  const long double num = widen_up(log_l / 4 + log_s + static_cast<long double>(kFamilyUpperGapConstant) + 1e-18L);
  const long double den = widen_down(log_l / 16 + vy_coeff * std::log(2.0L) - 1e-18L);
  return static_cast<double>(widen_up(num / den));
}

GeneratorSearchWitness search_generator(const Curve& c, const CurvePoint& p) {
  GeneratorSearchWitness w;
  const HeightInterval hp = canonical_height(c, p, 8);
  w.hhat_p_hi = hp.hi;
  const SilvermanBounds gaps = silverman_gaps(c);
  // P = nQ + delta T with n >= 3 gives hhat(Q) <= hhat(P)/9, hence
  // h(Q) <= 2 (hhat(P)/9 + lower_gap).
  const Interval target = Interval{hp.hi, hp.hi} / Interval::point(9.0);
  const Interval logb = scale(target + gaps.lower_gap, 2.0);
  w.log_height_bound = logb.hi;
  w.height_bound = Int(std::floor(std::exp(logb.hi))) + 1;
  const auto pts = small_height_points(c, w.height_bound, &w.points_examined);
  w.min_hhat_lo = std::numeric_limits<double>::infinity();
  for (const auto& q : pts) w.min_hhat_lo = std::min(w.min_hhat_lo, canonical_height(c, q, 6).lo);
  w.descent_rank_upper = selmer(Int(-c.a())).rank_upper;
  w.certified = w.min_hhat_lo > target.hi;
  return w;
}

}  // namespace

PrimitivityCert certify_primitive(const Int& s, const Int& t) {
  if (s < 1 || t < 1) throw PreconditionError("s,t >= 1", "(s, t) = (" + s.get_str() + ", " + t.get_str() + ")");
  const Int l = s * s * s * s + t * t;
  if (!kth_power_free(l, 4)) throw PreconditionError("l fourth-power-free", "l = " + l.get_str());
  if (is_square(l)) throw PreconditionError("l not a square", "l = " + l.get_str());

  PrimitivityCert cert;
  cert.s = s;
  cert.t = t;
  cert.l = l;
  const Curve c = make_family(s, t);
  cert.torsion_ok = torsion(c).structure == TorsionInfo::Structure::Z2;
  cert.n2_excluded = exclude_n2(s, t);

  // hhat(P) <= h(P)/2 + (1/4) log l + 2.03781 with h(P) = log s^2;
  // hhat(Q) > vy_lower_bound(-l).
  const Interval numerator =
      scale(log_abs(l), 0.25) + log_abs(s) + constant(kFamilyUpperGapConstant);
  const Interval denominator = vy_lower_bound_interval(Int(-l));
  if (denominator.lo > 0.0) {
    cert.ratio_hi = (numerator / denominator).hi;
    cert.ratio_ok = cert.ratio_hi < kPrimitivityRatioLimit - kPrimitivityMargin;
    if (!cert.ratio_ok && cert.ratio_hi < kPrimitivityRatioLimit + kPrimitivityMargin) {
      cert.precision_escalated = true;
      cert.ratio_hi = ratio_hi_extended(s, l, vy_log2_coefficient(Int(-l)));
      cert.ratio_ok = cert.ratio_hi < kPrimitivityRatioLimit - 1e-12;
    }
  } else {
    cert.ratio_hi = std::numeric_limits<double>::infinity();
  }

  bool special_ok = false;
  if (l == 2) {
    cert.special_case = search_generator(c, family_point(c));
    special_ok = cert.special_case->certified;
  }

  cert.verdict = cert.torsion_ok && cert.n2_excluded && (cert.ratio_ok || special_ok);
  if (!cert.verdict) {
    if (!cert.torsion_ok)
      cert.detail = "torsion is not Z/2";
    else if (!cert.n2_excluded)
      cert.detail = "n = 2 not excluded";
    else
      cert.detail = "undecided: ratio bound " + std::to_string(cert.ratio_hi) + " not below 9";
  }
  return cert;
}

}  // namespace divcert
