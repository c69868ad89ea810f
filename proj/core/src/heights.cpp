#include "divcert/heights.hpp"

#include <algorithm>
#include <cmath>

namespace divcert {

Interval naive_height_interval(const CurvePoint& p) {
  if (p.is_infinity()) return Interval::point(0.0);
  const Rat& x = p.x();
  Int m = std::max(Int(abs(x.get_num())), x.get_den());
  return log_abs(m);
}

double naive_height(const CurvePoint& p) { return naive_height_interval(p).mid(); }

SilvermanBounds silverman_gaps(const Curve& c) {
  const Interval hj = log_abs(Int(1728));
  const Interval hdelta = log_abs(c.discriminant());
  SilvermanBounds b;
  b.lower_gap = scale(hj, 1.0 / 8.0) + hdelta / Interval::point(12.0) + constant(0.973);
  b.upper_gap = hj / Interval::point(12.0) + hdelta / Interval::point(12.0) + constant(1.07);
  return b;
}

HeightInterval canonical_height(const Curve& c, const CurvePoint& p, int k) {
  if (k < 1) throw ArgumentError("canonical_height: k must be >= 1");
  if (!c.contains(p)) throw ArgumentError("canonical_height: point not on curve");
  if (torsion(c).contains(p)) throw ArgumentError("canonical_height: torsion point (hhat = 0)");
  CurvePoint q = p;
  for (int i = 0; i < k; ++i) q = c.dbl(q);
  const SilvermanBounds gaps = silverman_gaps(c);
  const Interval h = naive_height_interval(q);
  const Interval four_k = Interval::point(std::ldexp(1.0, 2 * k));  // exact
  const Interval half_h = scale(h, 0.5);
  const Interval lo = (half_h - gaps.lower_gap) / four_k;
  const Interval hi = (half_h + gaps.upper_gap) / four_k;
  return HeightInterval{lo.lo, hi.hi, k};
}

double vy_log2_coefficient(const Int& a) {
  if (a == 0 || !kth_power_free(a, 4)) throw ArgumentError("vy_lower_bound: a must be nonzero and fourth-power-free");
  const long r16 = static_cast<long>(mpz_fdiv_ui(a.get_mpz_t(), 16));
  const long r64 = static_cast<long>(mpz_fdiv_ui(a.get_mpz_t(), 64));
  const bool positive = a > 0;
  double coeff = 0.0;  // multiple of log 2
  auto in = [](long v, std::initializer_list<long> set) { return std::find(set.begin(), set.end(), v) != set.end(); };
  if (in(r16, {1, 5, 7, 9, 13, 15})) {
    coeff = positive ? 0.5 : 9.0 / 16.0;
  } else if (in(r64, {20, 36}) || in(r16, {2, 3, 6, 8, 10, 11, 12, 14})) {
    coeff = positive ? 0.25 : 5.0 / 16.0;
  } else if (in(r64, {4, 52})) {
    coeff = positive ? -1.0 / 8.0 : -1.0 / 16.0;
  } else {
    throw std::logic_error("vy_lower_bound: residue not covered by the table");
  }
  return coeff;
}

Interval vy_lower_bound_interval(const Int& a) {
  return scale(log_abs(a), 1.0 / 16.0) + scale(ln2(), vy_log2_coefficient(a));
}

double vy_lower_bound(const Int& a) { return vy_lower_bound_interval(a).lo; }

}  // namespace divcert
