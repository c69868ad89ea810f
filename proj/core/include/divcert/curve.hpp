#pragma once

// Curves y^2 = x^3 + a*x over Q, exact chord-tangent arithmetic, torsion,
// division polynomials, reduction data and point counts mod p.

#include <optional>
#include <string>
#include <vector>

#include "divcert/arith.hpp"

namespace divcert {

class CurvePoint {
 public:
  static CurvePoint infinity() { return CurvePoint(); }
  // Unvalidated affine point; use Curve::point() to validate.
  static CurvePoint affine(Rat x, Rat y) { return CurvePoint(std::move(x), std::move(y)); }

  bool is_infinity() const { return infinity_; }
  const Rat& x() const;
  const Rat& y() const;

  CurvePoint operator-() const;
  friend bool operator==(const CurvePoint& a, const CurvePoint& b);

  std::string to_string() const;

 private:
  CurvePoint() = default;
  CurvePoint(Rat x, Rat y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  bool infinity_ = true;
  Rat x_;
  Rat y_;
};

struct FamilyTag {
  Int s;
  Int t;
};

class Curve {
 public:
  explicit Curve(Int a);

  const Int& a() const { return a_; }
  const std::optional<FamilyTag>& family() const { return family_; }

  bool contains(const CurvePoint& p) const;
  // Validated affine point.
  CurvePoint point(const Rat& x, const Rat& y) const;

  CurvePoint add(const CurvePoint& p, const CurvePoint& q) const;
  CurvePoint dbl(const CurvePoint& p) const { return add(p, p); }
  CurvePoint smul(const Int& k, const CurvePoint& p) const;
  // P + (0, 0).
  CurvePoint translate_by_T(const CurvePoint& p) const;

  // Minimal discriminant of this model: -16 * 4a^3.
  Int discriminant() const { return Int(-64) * a_ * a_ * a_; }

  friend Curve make_family(const Int& s, const Int& t);

 private:
  void require_on_curve(const CurvePoint& p) const;

  Int a_;
  std::optional<FamilyTag> family_;
};

// E_{s,t}: y^2 = x^3 - (s^4 + t^2) x.
Curve make_family(const Int& s, const Int& t);
// The point (-s^2, s*t) on E_{s,t}.
CurvePoint family_point(const Curve& c);

// ---------------------------------------------------------------------------
// Torsion.

struct TorsionInfo {
  enum class Structure { Z2, Z2xZ2, Z4 };
  Structure structure = Structure::Z2;
  std::vector<CurvePoint> generators;
  std::vector<CurvePoint> points;  // all torsion points, infinity first

  int order() const { return static_cast<int>(points.size()); }
  bool contains(const CurvePoint& p) const;
  std::string name() const;
};

TorsionInfo torsion(const Curve& c);

// Dense integer polynomial, coefficients in increasing degree.
struct Poly {
  std::vector<Int> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Int eval(const Int& x) const;
  void trim();
};

// For y^2 = x^3 + a x: psi_m for odd m, psi_m / y for even m, as a polynomial in x.
Poly division_polynomial(const Int& a, int m);

// Integer roots of f (f nonzero), via Hensel lifting of simple roots modulo a
// suitable prime. Sorted ascending.
std::vector<Int> integer_roots(const Poly& f);

// E(Q)[m] != 0, for m in {3, 5, 7}.
bool has_rational_m_torsion(const Curve& c, int m);

// ---------------------------------------------------------------------------
// Reduction.

struct ReductionData {
  Int prime;
  bool good = false;
  std::optional<std::string> kodaira;  // only "III" is classified
  std::optional<Int> tamagawa_c;
};

ReductionData reduction_at(const Curve& c, const Int& q);

// #E(F_p) including infinity; p odd prime of good reduction, p <= 10^6.
Int count_points_mod_p(const Curve& c, const Int& p);

}  // namespace divcert
