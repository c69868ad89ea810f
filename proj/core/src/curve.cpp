#include "divcert/curve.hpp"

#include <algorithm>

namespace divcert {

const Rat& CurvePoint::x() const {
  if (infinity_) throw ArgumentError("x() of the point at infinity");
  return x_;
}

const Rat& CurvePoint::y() const {
  if (infinity_) throw ArgumentError("y() of the point at infinity");
  return y_;
}

CurvePoint CurvePoint::operator-() const {
  if (infinity_) return *this;
  return CurvePoint(x_, -y_);
}

bool operator==(const CurvePoint& a, const CurvePoint& b) {
  if (a.infinity_ || b.infinity_) return a.infinity_ == b.infinity_;
  return a.x_ == b.x_ && a.y_ == b.y_;
}

std::string CurvePoint::to_string() const {
  if (infinity_) return "inf";
  return "(" + x_.get_str() + ", " + y_.get_str() + ")";
}

Curve::Curve(Int a) : a_(std::move(a)) {
  if (a_ == 0) throw ArgumentError("singular curve: a = 0");
}

bool Curve::contains(const CurvePoint& p) const {
  if (p.is_infinity()) return true;
  const Rat& x = p.x();
  return p.y() * p.y() == x * x * x + Rat(a_) * x;
}

CurvePoint Curve::point(const Rat& x, const Rat& y) const {
  CurvePoint p = CurvePoint::affine(x, y);
  require_on_curve(p);
  return p;
}

void Curve::require_on_curve(const CurvePoint& p) const {
  if (!contains(p)) throw ArgumentError("point " + p.to_string() + " is not on y^2 = x^3 + " + a_.get_str() + "x");
}

namespace {

CurvePoint chord_tangent(const Int& a, const CurvePoint& p, const CurvePoint& q) {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  Rat lambda;
  if (p.x() == q.x()) {
    if (p.y() != q.y() || p.y() == 0) return CurvePoint::infinity();
    lambda = (3 * p.x() * p.x() + Rat(a)) / (2 * p.y());
  } else {
    lambda = (q.y() - p.y()) / (q.x() - p.x());
  }
  Rat x3 = lambda * lambda - p.x() - q.x();
  Rat y3 = lambda * (p.x() - x3) - p.y();
  return CurvePoint::affine(std::move(x3), std::move(y3));
}

}  // namespace

CurvePoint Curve::add(const CurvePoint& p, const CurvePoint& q) const {
  require_on_curve(p);
  require_on_curve(q);
  return chord_tangent(a_, p, q);
}

CurvePoint Curve::smul(const Int& k, const CurvePoint& p) const {
  require_on_curve(p);
  CurvePoint base = k < 0 ? -p : p;
  Int e = abs(k);
  CurvePoint acc = CurvePoint::infinity();
  const size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    acc = chord_tangent(a_, acc, acc);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = chord_tangent(a_, acc, base);
  }
  return acc;
}

CurvePoint Curve::translate_by_T(const CurvePoint& p) const {
  require_on_curve(p);
  const CurvePoint T = CurvePoint::affine(Rat(0), Rat(0));
  CurvePoint r = chord_tangent(a_, p, T);
  if (!p.is_infinity() && p.x() != 0) {
    // x(P + T) = a / x(P)
    if (r.is_infinity() || r.x() != Rat(a_) / p.x())
      throw std::logic_error("translate_by_T: x(P+T) != a/x(P)");
  }
  return r;
}

Curve make_family(const Int& s, const Int& t) {
  if (s == 0 && t == 0) throw ArgumentError("make_family: (s, t) = (0, 0)");
  Curve c(-(s * s * s * s + t * t));
  c.family_ = FamilyTag{s, t};
  c.require_on_curve(family_point(c));
  return c;
}

CurvePoint family_point(const Curve& c) {
  if (!c.family()) throw ArgumentError("family_point: curve is not family-tagged");
  const auto& [s, t] = *c.family();
  return CurvePoint::affine(Rat(-s * s), Rat(s * t));
}

// ---------------------------------------------------------------------------

bool TorsionInfo::contains(const CurvePoint& p) const {
  return std::find(points.begin(), points.end(), p) != points.end();
}

std::string TorsionInfo::name() const {
  switch (structure) {
    case Structure::Z2: return "Z/2";
    case Structure::Z2xZ2: return "Z/2 x Z/2";
    case Structure::Z4: return "Z/4";
  }
  return "?";
}

TorsionInfo torsion(const Curve& c) {
  const Int& a = c.a();
  TorsionInfo info;
  const CurvePoint T = CurvePoint::affine(Rat(0), Rat(0));
  info.points.push_back(CurvePoint::infinity());
  info.points.push_back(T);
  if (is_square(Int(-a))) {
    Int m = isqrt(Int(-a));
    info.structure = TorsionInfo::Structure::Z2xZ2;
    CurvePoint P = CurvePoint::affine(Rat(m), Rat(0));
    info.generators = {T, P};
    info.points.push_back(P);
    info.points.push_back(CurvePoint::affine(Rat(-m), Rat(0)));
    return info;
  }
  if (a > 0) {
    // y^2 = x^3 + 4k^4 x is isomorphic to the a = 4 curve, which has (2, 4) of order 4.
    auto [free_part, k] = kth_power_free_part(a, 4);
    if (free_part == 4) {
      CurvePoint P = CurvePoint::affine(Rat(2 * k * k), Rat(4 * k * k * k));
      info.structure = TorsionInfo::Structure::Z4;
      info.generators = {P};
      info.points.push_back(P);
      info.points.push_back(-P);
      return info;
    }
  }
  info.generators = {T};
  return info;
}

// ---------------------------------------------------------------------------

Int Poly::eval(const Int& x) const {
  Int acc = 0;
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

void Poly::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

namespace {

Poly mul(const Poly& f, const Poly& g) {
  if (f.coeffs.empty() || g.coeffs.empty()) return {};
  Poly r;
  r.coeffs.assign(f.coeffs.size() + g.coeffs.size() - 1, Int(0));
  for (size_t i = 0; i < f.coeffs.size(); ++i)
    for (size_t j = 0; j < g.coeffs.size(); ++j) r.coeffs[i + j] += f.coeffs[i] * g.coeffs[j];
  r.trim();
  return r;
}

Poly sub(const Poly& f, const Poly& g) {
  Poly r = f;
  if (r.coeffs.size() < g.coeffs.size()) r.coeffs.resize(g.coeffs.size(), Int(0));
  for (size_t i = 0; i < g.coeffs.size(); ++i) r.coeffs[i] -= g.coeffs[i];
  r.trim();
  return r;
}

Poly halve(Poly f) {
  for (auto& c : f.coeffs) {
    if (mpz_odd_p(c.get_mpz_t())) throw std::logic_error("division polynomial: odd coefficient before halving");
    c /= 2;
  }
  return f;
}

Poly cube(const Poly& f) { return mul(mul(f, f), f); }
Poly sq(const Poly& f) { return mul(f, f); }

}  // namespace

Poly division_polynomial(const Int& a, int m) {
  if (m < 0) throw ArgumentError("division_polynomial: m < 0");
  std::vector<Poly> g(std::max(m + 1, 5));
  g[0] = Poly{};
  g[1] = Poly{{Int(1)}};
  g[2] = Poly{{Int(2)}};
  g[3] = Poly{{-a * a, Int(0), 6 * a, Int(0), Int(3)}};
  g[4] = Poly{{-4 * a * a * a, Int(0), -20 * a * a, Int(0), 20 * a, Int(0), Int(4)}};
  const Poly F2 = sq(Poly{{Int(0), a, Int(0), Int(1)}});  // (x^3 + a x)^2 = y^4
  for (int n = 5; n <= m; ++n) {
    const int k = n / 2;
    if (n % 2 == 1) {
      if (k % 2 == 0)
        g[n] = sub(mul(F2, mul(g[k + 2], cube(g[k]))), mul(g[k - 1], cube(g[k + 1])));
      else
        g[n] = sub(mul(g[k + 2], cube(g[k])), mul(F2, mul(g[k - 1], cube(g[k + 1]))));
    } else {
      g[n] = halve(mul(g[k], sub(mul(g[k + 2], sq(g[k - 1])), mul(g[k - 2], sq(g[k + 1])))));
    }
  }
  return g[m];
}

namespace {

long eval_mod(const Poly& f, long x, long q) {
  long acc = 0;
  for (size_t i = f.coeffs.size(); i-- > 0;) {
    long c = static_cast<long>(mpz_fdiv_ui(f.coeffs[i].get_mpz_t(), static_cast<unsigned long>(q)));
    acc = static_cast<long>((static_cast<__int128>(acc) * x + c) % q);
  }
  return acc;
}

Poly derivative(const Poly& f) {
  Poly d;
  for (size_t i = 1; i < f.coeffs.size(); ++i) d.coeffs.push_back(f.coeffs[i] * Int(static_cast<unsigned long>(i)));
  d.trim();
  return d;
}

}  // namespace

std::vector<Int> integer_roots(const Poly& input) {
  Poly f = input;
  f.trim();
  if (f.coeffs.empty()) throw ArgumentError("integer_roots of the zero polynomial");
  std::vector<Int> roots;
  size_t shift = 0;
  while (shift < f.coeffs.size() && f.coeffs[shift] == 0) ++shift;
  if (shift > 0) {
    roots.push_back(Int(0));
    f.coeffs.erase(f.coeffs.begin(), f.coeffs.begin() + static_cast<long>(shift));
  }
  if (f.degree() <= 0) return roots;

  const Poly df = derivative(f);
  const Int& lc = f.coeffs.back();
  // Cauchy bound on |root|.
  Int bound = 0;
  for (const auto& c : f.coeffs) bound = std::max(bound, Int(abs(c)));
  bound = bound / abs(lc) + 2;

  for (long q = 3; q < 200000; q += 2) {
    if (!is_prime_u64(static_cast<std::uint64_t>(q))) continue;
    if (mpz_fdiv_ui(lc.get_mpz_t(), static_cast<unsigned long>(q)) == 0) continue;
    std::vector<long> residues;
    bool simple = true;
    for (long r = 0; r < q && simple; ++r) {
      if (eval_mod(f, r, q) != 0) continue;
      if (eval_mod(df, r, q) == 0) simple = false;
      residues.push_back(r);
    }
    if (!simple) continue;

    Int modulus = q;
    std::vector<Int> lifted(residues.begin(), residues.end());
    while (modulus <= 2 * bound) {
      const Int next = modulus * modulus;
      for (auto& r : lifted) {
        Int inv;
        Int d = df.eval(r) % next;
        if (mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), next.get_mpz_t()) == 0)
          throw std::logic_error("integer_roots: derivative not invertible");
        r = (r - f.eval(r) * inv) % next;
        if (r < 0) r += next;
      }
      modulus = next;
    }
    for (const auto& r : lifted) {
      Int z = r > modulus / 2 ? Int(r - modulus) : r;
      if (f.eval(z) == 0) roots.push_back(z);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  throw std::logic_error("integer_roots: no prime with separable reduction found");
}

bool has_rational_m_torsion(const Curve& c, int m) {
  if (m != 3 && m != 5 && m != 7) throw ArgumentError("has_rational_m_torsion: m must be 3, 5 or 7");
  // Torsion points have integral coordinates, so only integer roots of psi_m matter.
  const Poly psi = division_polynomial(c.a(), m);
  for (const Int& x : integer_roots(psi)) {
    Int y2 = x * x * x + c.a() * x;
    if (y2 != 0 && is_square(y2)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

ReductionData reduction_at(const Curve& c, const Int& q) {
  if (!is_prime(q)) throw ArgumentError("reduction_at: " + q.get_str() + " is not prime");
  ReductionData r;
  r.prime = q;
  const Int disc = c.discriminant();
  r.good = !mpz_divisible_p(disc.get_mpz_t(), q.get_mpz_t());
  if (r.good) return r;
  const Int c4 = Int(-48) * c.a();
  if (q >= 5 && vp_unchecked(c4, q) == 1 && vp_unchecked(disc, q) == 3) {
    r.kodaira = "III";
    r.tamagawa_c = Int(2);
  }
  return r;
}

Int count_points_mod_p(const Curve& c, const Int& p) {
  if (p > 1000000 || p < 3 || !is_prime(p)) throw ArgumentError("count_points_mod_p: need an odd prime p <= 10^6");
  if (!reduction_at(c, p).good) throw ArgumentError("count_points_mod_p: bad reduction at " + p.get_str());
  const long q = p.get_si();
  const long a = static_cast<long>(mpz_fdiv_ui(c.a().get_mpz_t(), static_cast<unsigned long>(q)));
  std::vector<char> is_qr(static_cast<size_t>(q), 0);
  for (long y = 1; y < q; ++y) is_qr[static_cast<size_t>(y * y % q)] = 1;
  long count = 1;  // infinity
  for (long x = 0; x < q; ++x) {
    long v = (x * x % q * x + a * x) % q;
    if (v == 0)
      count += 1;
    else if (is_qr[static_cast<size_t>(v)])
      count += 2;
  }
  return Int(count);
}

}  // namespace divcert
