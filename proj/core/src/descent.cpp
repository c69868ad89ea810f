#include "divcert/descent.hpp"

#include <algorithm>
#include <stdexcept>

namespace divcert {

std::string_view to_string(IsogenySide side) { return side == IsogenySide::Phi ? "phi" : "phihat"; }

std::vector<Int> descent_classes(const Int& l) {
  if (l == 2) return {Int(1), Int(-1), Int(2), Int(-2)};
  return {Int(1), Int(-1), Int(2), Int(-2), l, Int(-l), Int(2 * l), Int(-2 * l)};
}

Int square_class_product(const Int& d1, const Int& d2, const Int& l) {
  Int prod = d1 * d2;
  const Int l2 = l * l;
  while (mpz_divisible_ui_p(prod.get_mpz_t(), 4)) prod /= 4;
  while (mpz_divisible_p(prod.get_mpz_t(), l2.get_mpz_t())) prod /= l2;
  return prod;
}

Torsor make_torsor(IsogenySide side, const Int& d, const Int& l) {
  if (l < 2 || !is_prime(l)) throw ArgumentError("make_torsor: l must be prime");
  const auto classes = descent_classes(l);
  if (std::find(classes.begin(), classes.end(), d) == classes.end())
    throw ArgumentError("make_torsor: d = " + d.get_str() + " is not a square-class representative for l = " + l.get_str());
  Torsor t;
  t.side = side;
  t.d = d;
  t.l = l;
  t.alpha = d;
  t.beta = side == IsogenySide::Phi ? Int(4 * l / d) : Int(-16 * l / d);
  return t;
}

CurvePoint isogeny_phi(const Curve& source, const CurvePoint& p) {
  if (!source.contains(p)) throw ArgumentError("isogeny_phi: point not on source curve");
  if (p.is_infinity() || p.x() == 0) return CurvePoint::infinity();
  const Rat l = Rat(-source.a());
  const Rat x2 = p.x() * p.x();
  const Curve target(Int(-4) * source.a());
  return target.point(p.y() * p.y() / x2, -p.y() * (x2 + l) / x2);
}

namespace {

// Decides w^2 = coeff * r^4 + rest over r in the residue class
// r0 + p^k Z_p; returns true as soon as some member gives a Q_p-square.
class QuarticSolver {
 public:
  QuarticSolver(const Int& p) : p_(p), guard_(p == 2 ? 3 : 1) {}

  bool explore(const Int& coeff, const Int& rest, const Int& r0, int k, const Int& pk) const {
    const Int r2 = r0 * r0;
    const Int f = coeff * r2 * r2 + rest;
    if (f == 0) return true;  // w = 0 point
    const long ef = vp_unchecked(f, p_);
    const long ec = vp_unchecked(coeff, p_);
    // Every member of the class differs from f by a multiple of p^(ec + k),
    // so the square class is fixed once f is known to guard_ extra digits.
    if (ef + guard_ <= ec + k) return square_class_local(Rat(f), Place{Place::Kind::Prime, p_});
    if (k > kMaxDepth) throw std::logic_error("locally_soluble: refinement depth exceeded");
    const Int next = pk * p_;
    for (Int j = 0; j < p_; ++j)
      if (explore(coeff, rest, r0 + j * pk, k + 1, next)) return true;
    return false;
  }

 private:
  static constexpr int kMaxDepth = 256;
  Int p_;
  long guard_;
};

// Odd p, after the rescalings u -> pu, v -> pv (p^4 on one coefficient) and
// w -> pw (p^2 on both): one coefficient a unit. Empty when not in that shape.
std::optional<bool> odd_prime_closed_form(Int alpha, Int beta, const Int& p) {
  long a = vp_unchecked(alpha, p), b = vp_unchecked(beta, p);
  Int q;
  mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), 4 * static_cast<unsigned long>(a / 4));
  alpha /= q;
  mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), 4 * static_cast<unsigned long>(b / 4));
  beta /= q;
  a %= 4;
  b %= 4;
  const Int p2 = p * p;
  while (a >= 2 && b >= 2) {
    alpha /= p2;
    beta /= p2;
    a -= 2;
    b -= 2;
  }
  if (a > b) {
    std::swap(a, b);
    std::swap(alpha, beta);
  }
  if (a != 0) return std::nullopt;
  // Both units: smooth genus one reduction, which has F_p-points that lift.
  if (b == 0) return true;
  if (legendre(alpha, p) == 1) return true;
  return b == 2 && legendre(beta / p2, p) == 1;
}

}  // namespace

bool locally_soluble_by_refinement(const Torsor& t, const Int& p) {
  QuarticSolver solver(p);
  if (solver.explore(t.alpha, t.beta, Int(0), 0, Int(1))) return true;
  return solver.explore(t.beta, t.alpha, Int(0), 1, p);
}

bool locally_soluble(const Torsor& t, const Place& place) {
  if (place.is_real()) return t.alpha > 0 || t.beta > 0;
  const Int& p = place.prime;
  if (p != 2)
    if (auto v = odd_prime_closed_form(t.alpha, t.beta, p)) return *v;
  QuarticSolver solver(p);
  // Primitive (u, v) up to weighted scaling: (u, 1) with u in Z_p, or (1, v) with v in pZ_p.
  if (solver.explore(t.alpha, t.beta, Int(0), 0, Int(1))) return true;
  return solver.explore(t.beta, t.alpha, Int(0), 1, p);
}

std::optional<TorsorPoint> search_torsor_point(const Torsor& t, const Int& bound) {
  if (bound < 1) throw ArgumentError("search_torsor_point: bound must be >= 1");
  for (Int m = 0; m <= bound; ++m) {
    // pairs with max(u, v) = m, lexicographic
    for (Int u = 0; u <= m; ++u) {
      for (Int v = 0; v <= m; ++v) {
        if (u != m && v != m) continue;
        Int g;
        mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
        if (g != 1) continue;
        const Int u2 = u * u, v2 = v * v;
        const Int f = t.alpha * u2 * u2 + t.beta * v2 * v2;
        if (is_square(f)) return TorsorPoint{u, v, isqrt(f)};
      }
    }
  }
  return std::nullopt;
}

SelmerReport selmer(const Int& l) {
  if (l < 2 || !is_prime(l)) throw ArgumentError("selmer: l = " + l.get_str() + " is not prime");
  SelmerReport report;
  report.l = l;
  std::vector<Place> places{Place::real(), Place::at(Int(2))};
  if (l != 2) places.push_back(Place::at(l));

  for (IsogenySide side : {IsogenySide::Phi, IsogenySide::PhiHat}) {
    auto& sel = side == IsogenySide::Phi ? report.sel_phi : report.sel_phihat;
    for (const Int& d : descent_classes(l)) {
      const Torsor tor = make_torsor(side, d, l);
      bool everywhere = true;
      // Places after the first failure are not evaluated.
      for (const Place& pl : places) {
        everywhere = locally_soluble(tor, pl);
        report.local_tables.push_back({d, side, pl.name(), everywhere});
        if (!everywhere) break;
      }
      if (everywhere) sel.push_back(d);
    }
    // Subgroup of the square-class group: identity present, closed under products.
    if (std::find(sel.begin(), sel.end(), Int(1)) == sel.end())
      throw std::logic_error("selmer: trivial class not soluble");
    for (const Int& a : sel)
      for (const Int& b : sel)
        if (std::find(sel.begin(), sel.end(), square_class_product(a, b, l)) == sel.end())
          throw std::logic_error("selmer: soluble classes not closed under multiplication");
    const size_t n = sel.size();
    if ((n & (n - 1)) != 0) throw std::logic_error("selmer: size is not a power of two");
    int dim = 0;
    while ((size_t{1} << dim) < n) ++dim;
    (side == IsogenySide::Phi ? report.dim_phi : report.dim_phihat) = dim;
  }
  report.rank_upper = report.dim_phi + report.dim_phihat - 2;
  if (report.rank_upper < 0) throw std::logic_error("selmer: negative rank bound");
  return report;
}

int theorem_table_bound(const Int& l) {
  if (l < 2 || !is_prime(l)) throw ArgumentError("theorem_table_bound: l must be prime");
  switch (mpz_fdiv_ui(l.get_mpz_t(), 16)) {
    case 3:
    case 11:
    case 13: return 0;
    case 2:
    case 5:
    case 7:
    case 9:
    case 15: return 1;
    case 1: return 2;
  }
  throw std::logic_error("theorem_table_bound: unreachable residue");
}

RankOneCert certify_rank_one(const Int& s, const Int& t) {
  const Int l = s * s * s * s + t * t;
  if (!mpz_even_p(s.get_mpz_t())) throw PreconditionError("s even", "s = " + s.get_str());
  const unsigned long t8 = mpz_fdiv_ui(t.get_mpz_t(), 8);
  if (t8 != 3 && t8 != 5) throw PreconditionError("t = +-3 mod 8", "t = " + t.get_str());
  if (!is_prime(l)) throw PreconditionError("l prime", "l = " + l.get_str());

  RankOneCert cert;
  cert.s = s;
  cert.t = t;
  cert.l = l;
  cert.selmer_rank_upper = selmer(l).rank_upper;
  const Curve c = make_family(s, t);
  cert.witness = family_point(c);
  const TorsionInfo tors = torsion(c);
  cert.torsion_structure = tors.name();
  cert.witness_non_torsion = !tors.contains(cert.witness);
  cert.verdict = cert.witness_non_torsion && cert.selmer_rank_upper <= 1;
  return cert;
}

}  // namespace divcert
