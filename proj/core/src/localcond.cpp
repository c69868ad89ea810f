#include "divcert/localcond.hpp"

namespace divcert {

Rat formal_z(const Curve& c, const CurvePoint& p) {
  if (!c.contains(p)) throw ArgumentError("formal_z: point not on curve");
  if (p.is_infinity() || p.y() == 0) throw ArgumentError("formal_z: y = 0");
  return -p.x() / p.y();
}

Rat closed_form_x2P(const Int& s, const Int& t) {
  const Int s2 = s * s;
  Rat r = make_rat(2 * s2 * s2 + t * t, 2 * s * t);
  return r * r;
}

LocalCert check_local(const Int& s, const Int& t, const Int& p, int n) {
  if (n < 1) throw PreconditionError("n >= 1", "n = " + std::to_string(n));
  if (p < 3 || !is_prime(p)) throw PreconditionError("p odd prime", "p = " + p.get_str());
  const Int st = s * t;
  if (st == 0) throw PreconditionError("st != 0", "s = " + s.get_str() + ", t = " + t.get_str());
  const bool ps = mpz_divisible_p(s.get_mpz_t(), p.get_mpz_t());
  const bool pt = mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t());
  if (ps == pt) throw PreconditionError("p divides exactly one of s,t", "s = " + s.get_str() + ", t = " + t.get_str());
  Int pn1;
  mpz_pow_ui(pn1.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n + 1));
  if (!mpz_divisible_p(st.get_mpz_t(), pn1.get_mpz_t()))
    throw PreconditionError("st mod p^{n+1}", "p^(n+1) = " + pn1.get_str() + " does not divide st = " + st.get_str());

  LocalCert cert;
  cert.s = s;
  cert.t = t;
  cert.p = p;
  cert.n = n;

  const Curve c = make_family(s, t);
  const CurvePoint P = family_point(c);
  cert.two_p = c.dbl(P);
  const Rat& x2 = cert.two_p.x();
  const Rat& y2 = cert.two_p.y();
  cert.closed_form_match = x2 == closed_form_x2P(s, t);

  cert.v_st = vp_unchecked(st, p);
  cert.v_x2P = vp(x2, p).value();
  cert.v_y2P = vp(y2, p).value();
  cert.v_z2P = vp(formal_z(c, cert.two_p), p).value();
  if (cert.v_x2P != -2 * cert.v_st || cert.v_y2P != -3 * cert.v_st || cert.v_z2P != cert.v_st)
    throw std::logic_error("check_local: valuation identities violated for (" + s.get_str() + ", " + t.get_str() + ")");
  cert.x_not_integral = cert.v_x2P < 0;

  cert.good_at_p = reduction_at(c, p).good;
  // (0, 0) reduces to a point of order 2 in E(F_p).
  cert.parity_ok = cert.good_at_p;
  if (cert.good_at_p && p <= 10000) {
    cert.parity_ok = mpz_even_p(count_points_mod_p(c, p).get_mpz_t());
    cert.point_count_checked = true;
  }

  cert.verdict = cert.good_at_p && cert.parity_ok && cert.x_not_integral && cert.closed_form_match &&
                 cert.v_z2P >= n + 1;
  return cert;
}

}  // namespace divcert
