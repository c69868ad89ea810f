#pragma once

// p-adic conditions on 2P_{s,t}: valuations of x, y and the formal-group
// parameter z = -x/y, which place 2P_{s,t} in p^n E(Q_p).

#include "divcert/arith.hpp"
#include "divcert/curve.hpp"

namespace divcert {

struct LocalCert {
  Int s;
  Int t;
  Int p;
  int n = 0;

  long v_st = 0;
  long v_x2P = 0;
  long v_y2P = 0;
  long v_z2P = 0;
  Int f0 = 2;              // divisor of #E(F_p) prime to p used as the multiplier
  bool x_not_integral = false;  // v_p(x(2P)) < 0, so x(f0 P) is not in Z_p
  bool closed_form_match = false;
  bool good_at_p = false;
  bool parity_ok = false;  // #E(F_p) even
  bool point_count_checked = false;  // parity confirmed by an explicit count
  bool verdict = false;

  CurvePoint two_p = CurvePoint::infinity();
};

// Preconditions: p odd prime, st != 0, p divides exactly one of s and t,
// p^(n+1) | st. Violations raise PreconditionError with the failing name.
LocalCert check_local(const Int& s, const Int& t, const Int& p, int n);

// z = -x/y for an affine point with y != 0.
Rat formal_z(const Curve& c, const CurvePoint& p);

// x(2P_{s,t}) = ((2s^4 + t^2) / (2st))^2.
Rat closed_form_x2P(const Int& s, const Int& t);

}  // namespace divcert
