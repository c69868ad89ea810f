#pragma once

// Descent via the 2-isogeny phi: E^(l) -> E^(-4l), where E^(m): y^2 = x^3 - m x.
//
// Homogeneous spaces are kept in the normalized form
//     w^2 = alpha u^4 + beta v^4,
// with alpha = d and beta = 4l/d on the phi side (E^(l)) and
// beta = -16l/d on the phi-hat side (E^(-4l)).

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divcert/arith.hpp"
#include "divcert/curve.hpp"

namespace divcert {

enum class IsogenySide { Phi, PhiHat };

std::string_view to_string(IsogenySide side);

struct Torsor {
  IsogenySide side = IsogenySide::Phi;
  Int d;
  Int l;
  Int alpha;
  Int beta;
};

Torsor make_torsor(IsogenySide side, const Int& d, const Int& l);

// phi(x, y) = (y^2/x^2, -y (x^2 + l) / x^2) from y^2 = x^3 - l x to y^2 = x^3 + 4l x.
CurvePoint isogeny_phi(const Curve& source, const CurvePoint& p);

bool locally_soluble(const Torsor& t, const Place& place);
// Recursive residue-class refinement over both charts, for any prime p.
// locally_soluble() uses it at p = 2 and for odd p only when neither
// coefficient can be normalized to a unit.
bool locally_soluble_by_refinement(const Torsor& t, const Int& p);

// Point [u : v : w] with w^2 = alpha u^4 + beta v^4.
struct TorsorPoint {
  Int u;
  Int v;
  Int w;
};

std::optional<TorsorPoint> search_torsor_point(const Torsor& t, const Int& bound);

// Square-class representatives {+-1, +-2, +-l, +-2l} (only {+-1, +-2} when l = 2).
std::vector<Int> descent_classes(const Int& l);
// Product of two representatives, reduced modulo squares to a representative.
Int square_class_product(const Int& d1, const Int& d2, const Int& l);

struct LocalVerdict {
  Int d;
  IsogenySide side = IsogenySide::Phi;
  std::string place;
  bool soluble = false;
};

struct SelmerReport {
  Int l;
  std::vector<Int> sel_phi;
  std::vector<Int> sel_phihat;
  int dim_phi = 0;
  int dim_phihat = 0;
  int rank_upper = 0;
  std::vector<LocalVerdict> local_tables;
};

SelmerReport selmer(const Int& l);

// Bound keyed on l mod 16 (l = 2 counted with the class of 2).
int theorem_table_bound(const Int& l);

struct RankOneCert {
  Int s;
  Int t;
  Int l;
  int selmer_rank_upper = 0;
  CurvePoint witness = CurvePoint::infinity();
  std::string torsion_structure;
  bool witness_non_torsion = false;
  bool verdict = false;  // rank E_{s,t}(Q) = 1
};

// Requires l = s^4 + t^2 prime, s even, t = +-3 mod 8.
RankOneCert certify_rank_one(const Int& s, const Int& t);

}  // namespace divcert
