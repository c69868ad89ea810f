#pragma once

// Certifies that P_{s,t} = (-s^2, st) is not of the form nQ + delta*(0,0)
// with n >= 2 on E_{s,t}, hence P_{s,t} is not in pE(Q) for any prime p.

#include <optional>
#include <string>
#include <vector>

#include "divcert/arith.hpp"
#include "divcert/curve.hpp"
#include "divcert/heights.hpp"

namespace divcert {

// Direct certificate for l = 2: every non-torsion point of naive height up to
// the bound implied by n >= 3 has canonical height above hhat(P)/9.
struct GeneratorSearchWitness {
  double log_height_bound = 0.0;
  Int height_bound;
  long points_examined = 0;
  double hhat_p_hi = 0.0;
  double min_hhat_lo = 0.0;  // smallest lower bound over non-torsion points found
  int descent_rank_upper = -1;
  bool certified = false;
};

struct PrimitivityCert {
  Int s;
  Int t;
  Int l;
  bool torsion_ok = false;
  bool n2_excluded = false;
  double ratio_hi = 0.0;
  bool ratio_ok = false;
  bool precision_escalated = false;
  std::optional<GeneratorSearchWitness> special_case;  // l = 2 only
  bool verdict = false;
  std::string detail;  // empty when verdict holds
};

inline constexpr double kPrimitivityRatioLimit = 9.0;
inline constexpr double kPrimitivityMargin = 1e-6;

bool exclude_n2(const Int& s, const Int& t);

// Non-torsion points with naive height log max(|num x|, |den x|) <= log(bound).
std::vector<CurvePoint> small_height_points(const Curve& c, const Int& bound, long* examined = nullptr);

PrimitivityCert certify_primitive(const Int& s, const Int& t);

}  // namespace divcert
