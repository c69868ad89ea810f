#pragma once

// Theorem-level certificates: a ledger of machine-checked hypotheses and
// cited assumptions for one (s, t, p, n). A divisibility conclusion is a
// citation conditioned on the checked hypotheses, never a recomputed class
// number.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "divcert/arith.hpp"

namespace divcert {

inline constexpr int kCertificateSchemaVersion = 1;

struct FamilyMember {
  Int s;
  Int t;
  Int l;  // s^4 + t^2
  bool l_prime = false;
  PrimalityMethod primality_method = PrimalityMethod::Trivial;
  bool l_fourth_power_free = false;
  bool l_square = false;
  unsigned s_mod8 = 0, s_mod16 = 0, s_mod64 = 0;
  unsigned t_mod8 = 0, t_mod16 = 0, t_mod64 = 0;
  unsigned l_mod8 = 0, l_mod16 = 0, l_mod64 = 0;
};

FamilyMember make_family_member(const Int& s, const Int& t);

enum class CheckStatus { Pass, Fail, CitedAssumption };

// The only assumptions a certificate may cite.
enum class Citation {
  IrreducibilityDGJJU,
  FujitaTeraiGenerators,
  UnramifiedKummerCriterion,
  LawsonWuthrichClassification,
  SerreTateRamification,
  NeronModelReductionTable,
  WeilPairingCyclotomic,
};

std::string_view citation_text(Citation c);
std::string_view to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string witness;
  std::optional<Citation> citation;
};

enum class TheoremKind { MainResult, RefineFujitaTerai, InfiniteInstance };

std::string_view to_string(TheoremKind k);

struct Certificate {
  TheoremKind theorem = TheoremKind::MainResult;
  Int s;
  Int t;  // for the square subfamily this is tau^2
  std::optional<Int> tau;
  Int p;
  int n = 1;
  FamilyMember member;
  std::vector<Check> checks;
  int unramified_rank_lower_bound = 0;
  std::optional<std::string> conclusion;
  std::string conclusion_text;
  std::vector<Int> ramified_primes;
  std::optional<Int> distinctness_key;
  std::vector<std::string> notes;

  bool has_conclusion() const { return conclusion.has_value(); }
  // First failing non-cited check, if any.
  const Check* first_failure() const;
};

inline constexpr std::string_view kConclusionBasis =
    "cited theorem conditioned on machine-verified hypotheses; class number not recomputed";

std::vector<Check> h1_surrogates(const Int& s, const Int& t, const Int& p);

Certificate certify_main(const Int& s, const Int& t, const Int& p, int n);
Certificate certify_square_subfamily(const Int& s, const Int& tau, const Int& p);
Certificate certify_infinite_instance(const Int& s, const Int& t, const Int& p, int n);

// j-invariants of the two curves excluded at p = 11, computed from their
// Weierstrass coefficients.
Rat j_invariant_121c1();
Rat j_invariant_121c2();

// Number of pairwise non-isomorphic division fields among certificates
// carrying a distinctness key (one per distinct l).
std::size_t distinct_field_count(const std::vector<Certificate>& certs);

std::string to_jsonl(const Certificate& c);
std::string to_pretty(const Certificate& c);
std::string csv_header();
std::string to_csv(const Certificate& c);

}  // namespace divcert
