#pragma once

// Naive and canonical heights. The canonical height follows the
// normalization hhat(P) = 1/2 lim h(2^n P) / 4^n.

#include "divcert/arith.hpp"
#include "divcert/curve.hpp"

namespace divcert {

// Rigorous enclosure of hhat(P) obtained after `iterations` exact doublings.
struct HeightInterval {
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;

  Interval as_interval() const { return {lo, hi}; }
  double width() const { return hi - lo; }
};

// Both sides of the difference bound
//   -lower_gap <= hhat(P) - h(P)/2 <= upper_gap
// for y^2 = x^3 + a x, with h(j) = log 1728 and h(Delta) = log|64 a^3|.
struct SilvermanBounds {
  Interval lower_gap;  // h(j)/8 + h(Delta)/12 + 0.973
  Interval upper_gap;  // h(j)/12 + h(Delta)/12 + 1.07
};

// Closed-form constant of the upper gap for a = -(s^4 + t^2), minus (1/4) log l.
inline constexpr double kFamilyUpperGapConstant = 2.03781;

Interval naive_height_interval(const CurvePoint& p);
double naive_height(const CurvePoint& p);

SilvermanBounds silverman_gaps(const Curve& c);

inline constexpr int kDefaultHeightIterations = 5;

HeightInterval canonical_height(const Curve& c, const CurvePoint& p, int k = kDefaultHeightIterations);

// Lower bound for hhat(Q) over non-torsion Q on y^2 = x^3 + a x,
// a fourth-power-free, keyed on sign(a) and a mod 16 / mod 64.
// Table constant as a multiple of log 2.
double vy_log2_coefficient(const Int& a);
Interval vy_lower_bound_interval(const Int& a);
double vy_lower_bound(const Int& a);

}  // namespace divcert
