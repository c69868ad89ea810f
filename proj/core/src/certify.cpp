#include "divcert/certify.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "divcert/curve.hpp"
#include "divcert/descent.hpp"
#include "divcert/localcond.hpp"
#include "divcert/primitivity.hpp"
#include "json.hpp"

namespace divcert {

namespace {

unsigned mod_ui(const Int& n, unsigned long m) { return static_cast<unsigned>(mpz_fdiv_ui(n.get_mpz_t(), m)); }

Int pow_ui(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool divides(const Int& d, const Int& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Check pass_fail(std::string name, bool ok, std::string witness) {
  return Check{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(witness), std::nullopt};
}

Check cited(std::string name, Citation c, std::string witness = {}) {
  return Check{std::move(name), CheckStatus::CitedAssumption, std::move(witness), c};
}

Rat j_from_ainvariants(long a1, long a2, long a3, long a4, long a6) {
  const Int b2 = Int(a1 * a1 + 4 * a2);
  const Int b4 = Int(2 * a4 + a1 * a3);
  const Int b6 = Int(a3 * a3 + 4 * a6);
  const Int b8 = Int(a1) * a1 * a6 + Int(4) * a2 * a6 - Int(a1) * a3 * a4 + Int(a2) * a3 * a3 - Int(a4) * a4;
  const Int c4 = b2 * b2 - 24 * b4;
  const Int disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  return make_rat(c4 * c4 * c4, disc);
}

void require_p(const Int& p) {
  if (p < 5 || !is_prime(p)) throw ArgumentError("p must be a prime >= 5, got " + p.get_str());
}

std::string primitivity_witness(const PrimitivityCert& pc) {
  std::ostringstream os;
  os.precision(10);
  os << "ratio_hi=" << pc.ratio_hi << " (<9 required), n=2 excluded=" << (pc.n2_excluded ? "yes" : "no")
     << ", torsion Z/2=" << (pc.torsion_ok ? "yes" : "no");
  if (pc.special_case) {
    os << "; l=2 generator search: height bound " << pc.special_case->height_bound.get_str() << ", "
       << pc.special_case->points_examined << " x-values, min hhat lo " << pc.special_case->min_hhat_lo
       << " > hhat(P)/9, descent rank <= " << pc.special_case->descent_rank_upper;
  }
  if (!pc.detail.empty()) os << "; " << pc.detail;
  return os.str();
}

std::string local_witness(const LocalCert& lc) {
  std::ostringstream os;
  os << "v_p(st)=" << lc.v_st << ", v_p(x(2P))=" << lc.v_x2P << ", v_p(y(2P))=" << lc.v_y2P
     << ", v_p(z(2P))=" << lc.v_z2P << " (>= n+1=" << lc.n + 1 << "), f0=" << lc.f0.get_str()
     << ", closed form x(2P) matches=" << (lc.closed_form_match ? "yes" : "no")
     << ", #E(F_p) even=" << (lc.parity_ok ? "yes" : "no") << (lc.point_count_checked ? " (counted)" : " (contains (0,0))");
  return os.str();
}

// Runs a sub-certifier whose preconditions may fail; failures become ledger entries.
template <typename F>
Check guarded(std::string name, F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    return pass_fail(std::move(name), false, std::string("precondition failed: ") + e.what());
  }
}

// Hypothesis ledger shared by the main theorem and the infinite-family instances.
void main_ledger(Certificate& c) {
  const Int& s = c.s;
  const Int& t = c.t;
  const Int& p = c.p;
  const int n = c.n;
  const Int& l = c.member.l;
  const Int pn1 = pow_ui(p, static_cast<unsigned long>(n + 1));
  const Int st = s * t;

  c.checks.push_back(pass_fail("s,t >= 1", s >= 1 && t >= 1, "s=" + s.get_str() + ", t=" + t.get_str()));
  c.checks.push_back(pass_fail("gcd(s,t) = 1", gcd(s, t) == 1, "gcd=" + gcd(s, t).get_str()));
  c.checks.push_back(pass_fail("st mod p^{n+1}", st != 0 && divides(pn1, st),
                               "st=" + st.get_str() + ", p^{n+1}=" + pn1.get_str()));
  c.checks.push_back(pass_fail("p divides exactly one of s,t", divides(p, s) != divides(p, t),
                               std::string("p|s=") + (divides(p, s) ? "yes" : "no") + ", p|t=" + (divides(p, t) ? "yes" : "no")));
  c.checks.push_back(pass_fail("l fourth-power-free", c.member.l_fourth_power_free, "l=" + l.get_str()));
  c.checks.push_back(pass_fail("l not a square", !c.member.l_square, "l=" + l.get_str()));
  c.checks.push_back(pass_fail("good reduction at p", !divides(p, 2 * l), "2l=" + Int(2 * l).get_str()));
  c.checks.push_back(pass_fail("j-invariant p-integral", true, "j(E_{s,t}) = 1728 = 2^6 * 3^3"));
  for (auto& ch : h1_surrogates(s, t, p)) c.checks.push_back(std::move(ch));

  c.checks.push_back(guarded("P_{s,t} primitive", [&] {
    const PrimitivityCert pc = certify_primitive(s, t);
    return pass_fail("P_{s,t} primitive", pc.verdict, primitivity_witness(pc));
  }));
  c.checks.push_back(guarded("P_{s,t} in p^n E(Q_p)", [&] {
    const LocalCert lc = check_local(s, t, p, n);
    return pass_fail("P_{s,t} in p^n E(Q_p)", lc.verdict, local_witness(lc));
  }));
  c.checks.push_back(cited("unramified Kummer classes give Hom_G(Cl, E[p^n]) of rank >= r_ur",
                           Citation::UnramifiedKummerCriterion));
}

void conclude(Certificate& c, std::string code, std::string text, int rank_lower_bound) {
  if (c.first_failure() != nullptr) return;
  c.conclusion = std::move(code);
  c.conclusion_text = std::move(text);
  c.unramified_rank_lower_bound = rank_lower_bound;
}

std::string pn_text(const Int& p, int e) { return p.get_str() + "^" + std::to_string(e); }

}  // namespace

FamilyMember make_family_member(const Int& s, const Int& t) {
  FamilyMember m;
  m.s = s;
  m.t = t;
  m.l = s * s * s * s + t * t;
  const PrimalityVerdict pv = primality(m.l);
  m.l_prime = pv.prime;
  m.primality_method = pv.method;
  m.l_fourth_power_free = m.l != 0 && kth_power_free(m.l, 4);
  m.l_square = is_square(m.l);
  m.s_mod8 = mod_ui(s, 8);
  m.s_mod16 = mod_ui(s, 16);
  m.s_mod64 = mod_ui(s, 64);
  m.t_mod8 = mod_ui(t, 8);
  m.t_mod16 = mod_ui(t, 16);
  m.t_mod64 = mod_ui(t, 64);
  m.l_mod8 = mod_ui(m.l, 8);
  m.l_mod16 = mod_ui(m.l, 16);
  m.l_mod64 = mod_ui(m.l, 64);
  return m;
}

std::string_view citation_text(Citation c) {
  switch (c) {
    case Citation::IrreducibilityDGJJU:
      return "[DGJJU] E[p] is an irreducible F_p[Gal(Qbar/Q)]-module for this family";
    case Citation::FujitaTeraiGenerators:
      return "[Fujita-Terai] P_{s,tau^2} and P_{tau,s^2} extend to a system of generators of E(Q)";
    case Citation::UnramifiedKummerCriterion:
      return "Kummer-class criterion: Hom_G(Cl(Q(E[p^n])), E[p^n]) has rank at least r_ur, the length of "
             "E(Q)_{ur,p^n}/p^nE(Q), once H^1(Q(E[p^n])/Q, E[p^n]) = 0";
    case Citation::LawsonWuthrichClassification:
      return "[Lawson-Wuthrich] H^1(Q(E[p^n])/Q, E[p^n]) = 0 classification";
    case Citation::SerreTateRamification:
      return "[Serre-Tate] Neron-Ogg-Shafarevich: bad reduction at 2 and Type III at l force ramification at 2 and l";
    case Citation::NeronModelReductionTable:
      return "Neron model table: minimal discriminant 2^6 l^3, Kodaira Type III at l, c = 2";
    case Citation::WeilPairingCyclotomic:
      return "Weil pairing: Q(zeta_p) is contained in Q(E[p]), which is ramified at p";
  }
  return "";
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::CitedAssumption: return "cited-assumption";
  }
  return "";
}

std::string_view to_string(TheoremKind k) {
  switch (k) {
    case TheoremKind::MainResult: return "main_result";
    case TheoremKind::RefineFujitaTerai: return "refine_FT";
    case TheoremKind::InfiniteInstance: return "infinite_instance";
  }
  return "";
}

const Check* Certificate::first_failure() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return &c;
  return nullptr;
}

Rat j_invariant_121c1() { return j_from_ainvariants(1, 1, 0, -2, -7); }
Rat j_invariant_121c2() { return j_from_ainvariants(1, 1, 0, -3632, 82757); }

std::vector<Check> h1_surrogates(const Int& s, const Int& t, const Int& p) {
  require_p(p);
  std::vector<Check> out;
  if (p >= 13) {
    out.push_back(pass_fail("H^1(Q(E[p^n])/Q, E[p^n]) = 0", true, "automatic for p >= 13 [Lawson-Wuthrich]"));
    return out;
  }
  const Curve c = make_family(s, t);
  if (p == 11) {
    const Rat j(1728);
    const Rat j1 = j_invariant_121c1(), j2 = j_invariant_121c2();
    out.push_back(pass_fail("E not 121c1 nor 121c2", j != j1 && j != j2,
                            "j(E)=1728, j(121c1)=" + j1.get_str() + ", j(121c2)=" + j2.get_str()));
  } else if (p == 7) {
    const bool tors = has_rational_m_torsion(c, 7);
    out.push_back(pass_fail("E(Q)[7] = 0", !tors, "no integral root of psi_7 with rational y"));
  } else {  // p == 5
    const Curve twist(Int(25) * c.a());
    const bool tors = has_rational_m_torsion(twist, 5);
    out.push_back(pass_fail("twist by 5 has no rational 5-torsion", !tors,
                            "y^2 = x^3 - " + Int(-twist.a()).get_str() + "x: no integral root of psi_5 with rational y"));
    out.push_back(cited("E[5] irreducible", Citation::IrreducibilityDGJJU));
  }
  return out;
}

Certificate certify_main(const Int& s, const Int& t, const Int& p, int n) {
  require_p(p);
  if (n < 1) throw ArgumentError("n must be >= 1");
  Certificate c;
  c.theorem = TheoremKind::MainResult;
  c.s = s;
  c.t = t;
  c.p = p;
  c.n = n;
  c.member = make_family_member(s, t);
  main_ledger(c);
  conclude(c, "P2N_DIVIDES_CLASS_NUMBER",
           pn_text(p, 2 * n) + " | #Cl(Q(E_{" + s.get_str() + "," + t.get_str() + "}[" + pn_text(p, n) + "]))", 1);
  return c;
}

Certificate certify_square_subfamily(const Int& s, const Int& tau, const Int& p) {
  require_p(p);
  Certificate c;
  c.theorem = TheoremKind::RefineFujitaTerai;
  c.s = s;
  c.tau = tau;
  c.t = tau * tau;
  c.p = p;
  c.n = 1;
  c.member = make_family_member(s, c.t);
  const Int& l = c.member.l;
  const Int p2 = p * p;
  const Int stau = s * tau;

  c.checks.push_back(pass_fail("s,tau >= 1", s >= 1 && tau >= 1, "s=" + s.get_str() + ", tau=" + tau.get_str()));
  c.checks.push_back(pass_fail("gcd(s,tau) = 1", gcd(s, tau) == 1, "gcd=" + gcd(s, tau).get_str()));
  c.checks.push_back(pass_fail("p divides exactly one of s,tau", divides(p, s) != divides(p, tau),
                               std::string("p|s=") + (divides(p, s) ? "yes" : "no") + ", p|tau=" + (divides(p, tau) ? "yes" : "no")));
  c.checks.push_back(pass_fail("s*tau mod p^2", stau != 0 && divides(p2, stau), "s*tau=" + stau.get_str()));
  c.checks.push_back(pass_fail("l fourth-power-free", c.member.l_fourth_power_free, "l=s^4+tau^4=" + l.get_str()));
  c.checks.push_back(pass_fail("l not a square", !c.member.l_square, "l=" + l.get_str()));
  c.checks.push_back(pass_fail("good reduction at p", !divides(p, 2 * l), "2l=" + Int(2 * l).get_str()));
  if (s >= 1 && tau >= 1) {
    const Curve e = make_family(s, c.t);
    const CurvePoint p1 = CurvePoint::affine(Rat(-s * s), Rat(s * c.t));
    const CurvePoint p2pt = CurvePoint::affine(Rat(-tau * tau), Rat(tau * s * s));
    c.checks.push_back(pass_fail("P_{s,tau^2} on curve", e.contains(p1), p1.to_string()));
    c.checks.push_back(pass_fail("P_{tau,s^2} on curve", e.contains(p2pt), p2pt.to_string()));
    for (auto& ch : h1_surrogates(s, c.t, p)) c.checks.push_back(std::move(ch));
    c.checks.push_back(guarded("P_{s,tau^2} in pE(Q_p)", [&] {
      const LocalCert lc = check_local(s, c.t, p, 1);
      return pass_fail("P_{s,tau^2} in pE(Q_p)", lc.verdict, local_witness(lc));
    }));
    c.checks.push_back(guarded("P_{tau,s^2} in pE(Q_p)", [&] {
      const LocalCert lc = check_local(tau, s * s, p, 1);
      return pass_fail("P_{tau,s^2} in pE(Q_p)", lc.verdict, local_witness(lc));
    }));
  }
  if (p != 5) c.checks.push_back(cited("E[p] irreducible", Citation::IrreducibilityDGJJU));
  c.checks.push_back(cited("P_{s,tau^2}, P_{tau,s^2} extend to generators", Citation::FujitaTeraiGenerators));
  c.checks.push_back(cited("multiplicity of E[p] in (Cl/p)^ss is >= r_ur", Citation::UnramifiedKummerCriterion));
  c.notes.push_back("guards gcd(s,tau)=1 and 'p divides exactly one of s,tau' are added to the stated hypotheses");
  c.notes.push_back("modulus p^2 on s*tau is used for p^{n+1} with n = 1");
  conclude(c, "P4_DIVIDES_CLASS_NUMBER",
           pn_text(p, 4) + " | #Cl(Q(E_{" + s.get_str() + "," + tau.get_str() + "^2}[" + p.get_str() +
               "])); (Cl/p)^ss maps onto E[p]^(+)2",
           2);
  return c;
}

Certificate certify_infinite_instance(const Int& s, const Int& t, const Int& p, int n) {
  require_p(p);
  if (n < 1) throw ArgumentError("n must be >= 1");
  Certificate c;
  c.theorem = TheoremKind::InfiniteInstance;
  c.s = s;
  c.t = t;
  c.p = p;
  c.n = n;
  c.member = make_family_member(s, t);
  const Int& l = c.member.l;

  const bool s_even = mpz_even_p(s.get_mpz_t());
  const unsigned t8 = mod_ui(t, 8);
  const bool t_ok = t8 == 3 || t8 == 5;
  c.checks.push_back(pass_fail("s even", s_even, "s mod 8 = " + std::to_string(c.member.s_mod8)));
  c.checks.push_back(pass_fail("t = +-3 mod 8", t_ok, "t mod 8 = " + std::to_string(t8)));
  c.checks.push_back(pass_fail("l prime", c.member.l_prime,
                               "l=" + l.get_str() + " decided by " + std::string(to_string(c.member.primality_method))));
  main_ledger(c);

  if (s_even && t_ok && c.member.l_prime) {
    const RankOneCert rc = certify_rank_one(s, t);
    c.checks.push_back(pass_fail("rank E(Q) = 1", rc.verdict,
                                 "Selmer rank bound " + std::to_string(rc.selmer_rank_upper) + " (l mod 16 = " +
                                     std::to_string(c.member.l_mod16) + "); P=" + rc.witness.to_string() +
                                     " non-torsion, torsion " + rc.torsion_structure));
    const Curve e = make_family(s, t);
    const ReductionData red = reduction_at(e, l);
    const bool type3 = red.kodaira && *red.kodaira == "III" && red.tamagawa_c && *red.tamagawa_c == 2;
    c.checks.push_back(pass_fail("Type III reduction at l", type3,
                                 "v_l(c4)=" + std::to_string(vp_unchecked(Int(-48) * e.a(), l)) +
                                     ", v_l(Delta)=" + std::to_string(vp_unchecked(e.discriminant(), l)) + ", c=2"));
    c.checks.push_back(pass_fail("bad reduction at 2", !reduction_at(e, Int(2)).good, "2 | Delta = " + e.discriminant().get_str()));
    c.checks.push_back(cited("discriminant 2^6 l^3 minimal", Citation::NeronModelReductionTable));
    c.checks.push_back(cited("Q(E[p^n]) ramified at 2 and l", Citation::SerreTateRamification));
    c.checks.push_back(cited("Q(E[p^n]) ramified at p", Citation::WeilPairingCyclotomic));
    std::vector<Int> ram{Int(2), l, p};
    std::sort(ram.begin(), ram.end());
    ram.erase(std::unique(ram.begin(), ram.end()), ram.end());
    c.ramified_primes = ram;
    c.distinctness_key = l;
  }
  conclude(c, "RANK_ONE_AND_P2N_DIVIDES_CLASS_NUMBER",
           "rank E_{" + s.get_str() + "," + t.get_str() + "}(Q) = 1 and " + pn_text(p, 2 * n) + " | #Cl(Q(E[" +
               pn_text(p, n) + "])); field determined by l = " + l.get_str(),
           1);
  return c;
}

std::size_t distinct_field_count(const std::vector<Certificate>& certs) {
  std::set<std::string> keys;
  for (const auto& c : certs)
    if (c.distinctness_key && c.has_conclusion()) keys.insert(c.distinctness_key->get_str());
  return keys.size();
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json to_json(const Certificate& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["theorem"] = std::string(to_string(c.theorem));
  ordered_json subject;
  subject["s"] = c.s.get_str();
  subject["t"] = c.t.get_str();
  if (c.tau) subject["tau"] = c.tau->get_str();
  subject["p"] = c.p.get_str();
  subject["n"] = std::to_string(c.n);
  j["subject"] = subject;

  ordered_json fam;
  fam["l"] = c.member.l.get_str();
  fam["l_prime"] = c.member.l_prime;
  fam["primality_method"] = std::string(to_string(c.member.primality_method));
  fam["l_fourth_power_free"] = c.member.l_fourth_power_free;
  fam["l_square"] = c.member.l_square;
  fam["residues"] = ordered_json{{"s_mod8", c.member.s_mod8},   {"s_mod16", c.member.s_mod16}, {"s_mod64", c.member.s_mod64},
                                 {"t_mod8", c.member.t_mod8},   {"t_mod16", c.member.t_mod16}, {"t_mod64", c.member.t_mod64},
                                 {"l_mod8", c.member.l_mod8},   {"l_mod16", c.member.l_mod16}, {"l_mod64", c.member.l_mod64}};
  j["family"] = fam;

  ordered_json checks = ordered_json::array();
  for (const auto& ch : c.checks) {
    ordered_json e;
    e["name"] = ch.name;
    e["status"] = std::string(to_string(ch.status));
    e["witness"] = ch.witness;
    if (ch.citation) e["citation"] = std::string(citation_text(*ch.citation));
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["unramified_rank_lower_bound"] = c.unramified_rank_lower_bound;
  j["conclusion"] = c.conclusion ? ordered_json(*c.conclusion) : ordered_json(nullptr);
  j["conclusion_text"] = c.conclusion ? ordered_json(c.conclusion_text) : ordered_json(nullptr);
  j["conclusion_basis"] = std::string(kConclusionBasis);
  ordered_json ram = ordered_json::array();
  for (const auto& q : c.ramified_primes) ram.push_back(q.get_str());
  j["ramified_primes"] = ram;
  j["distinctness_key"] = c.distinctness_key ? ordered_json(c.distinctness_key->get_str()) : ordered_json(nullptr);
  j["notes"] = c.notes;
  return j;
}

}  // namespace

std::string to_jsonl(const Certificate& c) { return to_json(c).dump(); }

std::string to_pretty(const Certificate& c) {
  std::ostringstream os;
  os << to_string(c.theorem) << "  s=" << c.s.get_str() << " t=" << c.t.get_str();
  if (c.tau) os << " (tau=" << c.tau->get_str() << ")";
  os << " p=" << c.p.get_str() << " n=" << c.n << "  l=" << c.member.l.get_str() << "\n";
  for (const auto& ch : c.checks) {
    os << "  [" << to_string(ch.status) << "] " << ch.name;
    if (!ch.witness.empty()) os << " -- " << ch.witness;
    if (ch.citation) os << " -- " << citation_text(*ch.citation);
    os << "\n";
  }
  for (const auto& note : c.notes) os << "  note: " << note << "\n";
  if (c.conclusion) {
    os << "  conclusion: " << c.conclusion_text << "\n";
    os << "  basis: " << kConclusionBasis << "\n";
  } else {
    const Check* f = c.first_failure();
    os << "  no conclusion; first failing check: " << (f ? f->name : std::string("?")) << "\n";
  }
  return os.str();
}

std::string csv_header() { return "theorem,s,t,p,n,l,l_prime,conclusion,distinctness_key,first_failure"; }

std::string to_csv(const Certificate& c) {
  std::ostringstream os;
  const Check* f = c.first_failure();
  os << to_string(c.theorem) << ',' << c.s.get_str() << ',' << c.t.get_str() << ',' << c.p.get_str() << ',' << c.n << ','
     << c.member.l.get_str() << ',' << (c.member.l_prime ? 1 : 0) << ',' << (c.conclusion ? *c.conclusion : "") << ','
     << (c.distinctness_key ? c.distinctness_key->get_str() : "") << ',' << (f ? "\"" + f->name + "\"" : "");
  return os.str();
}

}  // namespace divcert
