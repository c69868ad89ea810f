// divcert: search, verify, selmer-table, heights.
//
// Exit status: 0 ok, 1 a hypothesis or certificate check failed, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "divcert/certify.hpp"
#include "divcert/curve.hpp"
#include "divcert/descent.hpp"
#include "divcert/heights.hpp"
#include "divcert/primitivity.hpp"
#include "divcert/search.hpp"
#include "json.hpp"

using namespace divcert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Range parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const long v = std::stol(text);
      return {1, v};
    }
    return {std::stol(text.substr(0, colon)), std::stol(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ArgumentError("bad range '" + text + "', expected LO:HI or HI");
  }
}

int workers_from_env() {
  const char* v = std::getenv("DIVCERT_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw ArgumentError(std::string("DIVCERT_WORKERS must be in 1..1024, got ") + v);
  return static_cast<int>(n);
}

void emit(const Certificate& c, OutputFormat f, std::ostream& os) {
  if (f == OutputFormat::Csv) os << csv_header() << "\n";
  os << format_record(c, f);
  if (f == OutputFormat::Pretty) os << to_jsonl(c) << "\n";
}

struct SearchArgs {
  std::string mode = "main";
  std::string p = "5";
  int n = 1;
  std::string s_range = "1:60";
  std::string t_range = "1:60";
  long target = 1;
  int workers = 0;
  std::string resume;
  std::string output;
  std::string format = "jsonl";
  long max_candidates = -1;
};

int run_search(const SearchArgs& a) {
  SearchConfig cfg;
  cfg.mode = parse_search_mode(a.mode);
  cfg.p = parse_int(a.p);
  cfg.n = a.n;
  cfg.s_range = parse_range(a.s_range);
  cfg.t_range = parse_range(a.t_range);
  cfg.target_count = a.target;
  cfg.workers = a.workers > 0 ? a.workers : workers_from_env();
  cfg.resume_path = a.resume;
  cfg.output_path = a.output;
  cfg.format = parse_output_format(a.format);
  if (a.max_candidates >= 0) cfg.max_candidates = static_cast<std::uint64_t>(a.max_candidates);

  const SearchResult r = search(cfg, &std::cout);
  std::cerr << "search: " << r.certificates.size() << " emitted this run (" << r.total_emitted << " total), "
            << r.candidates_examined << " candidates examined, " << r.candidates_certified << " certified, next index "
            << r.next_index << (r.interrupted ? ", interrupted" : "") << (r.target_reached ? ", target reached" : "")
            << "\n";
  if (cfg.mode == SearchMode::Infinite) {
    std::vector<Certificate> all = r.certificates;
    std::cerr << "search: " << distinct_field_count(all) << " pairwise distinct division fields (by l) this run\n";
  }
  return r.total_emitted > 0 || r.interrupted ? kExitOk : kExitFail;
}

struct VerifyArgs {
  std::string mode = "main";
  std::string s, t, tau;
  std::string p = "5";
  int n = 1;
  std::string format = "pretty";
  std::string output;
};

int run_rank(const Int& s, const Int& t, OutputFormat f) {
  const RankOneCert rc = certify_rank_one(s, t);
  const SelmerReport rep = selmer(rc.l);
  nlohmann::ordered_json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["fragment"] = "rank_one";
  j["s"] = s.get_str();
  j["t"] = t.get_str();
  j["l"] = rc.l.get_str();
  j["dim_phi"] = rep.dim_phi;
  j["dim_phihat"] = rep.dim_phihat;
  j["selmer_rank_upper"] = rc.selmer_rank_upper;
  j["witness"] = rc.witness.to_string();
  j["witness_non_torsion"] = rc.witness_non_torsion;
  j["torsion"] = rc.torsion_structure;
  j["rank"] = rc.verdict ? nlohmann::ordered_json("1") : nlohmann::ordered_json(nullptr);
  if (f == OutputFormat::Pretty) {
    std::cout << "rank-one fragment  s=" << s.get_str() << " t=" << t.get_str() << "  l=" << rc.l.get_str() << "\n"
              << "  Selmer dims phi=" << rep.dim_phi << " phihat=" << rep.dim_phihat
              << ", rank <= " << rc.selmer_rank_upper << "\n"
              << "  witness " << rc.witness.to_string() << " non-torsion=" << (rc.witness_non_torsion ? "yes" : "no")
              << ", torsion " << rc.torsion_structure << "\n"
              << "  verdict: " << (rc.verdict ? "rank = 1" : "undecided") << "\n";
  }
  if (f == OutputFormat::Csv)
    std::cout << "s,t,l,selmer_rank_upper,rank\n"
              << s.get_str() << ',' << t.get_str() << ',' << rc.l.get_str() << ',' << rc.selmer_rank_upper << ','
              << (rc.verdict ? "1" : "") << "\n";
  else
    std::cout << j.dump() << "\n";
  return rc.verdict ? kExitOk : kExitFail;
}

int run_verify(const VerifyArgs& a) {
  const OutputFormat f = parse_output_format(a.format);
  if (a.s.empty()) throw ArgumentError("--s is required");
  const Int s = parse_int(a.s);
  if (a.mode == "rank") {
    if (a.t.empty()) throw ArgumentError("--t is required");
    try {
      return run_rank(s, parse_int(a.t), f);
    } catch (const PreconditionError& e) {
      std::cerr << "verify: failing check \"" << e.reason() << "\": " << e.what() << "\n";
      return kExitFail;
    }
  }

  const Int p = parse_int(a.p);
  Certificate c;
  if (a.mode == "main" || a.mode == "infinite") {
    if (a.t.empty()) throw ArgumentError("--t is required");
    const Int t = parse_int(a.t);
    c = a.mode == "main" ? certify_main(s, t, p, a.n) : certify_infinite_instance(s, t, p, a.n);
  } else if (a.mode == "square" || a.mode == "square_subfamily") {
    if (a.tau.empty()) throw ArgumentError("--tau is required");
    c = certify_square_subfamily(s, parse_int(a.tau), p);
  } else {
    throw ArgumentError("unknown verify mode '" + a.mode + "'");
  }

  emit(c, f, std::cout);
  if (!a.output.empty()) {
    std::ofstream out(a.output, std::ios::app);
    if (!out) throw ArgumentError("cannot open output " + a.output);
    out << to_jsonl(c) << "\n";
  }
  if (const Check* fail = c.first_failure()) {
    std::cerr << "verify: failing check \"" << fail->name << "\"\n";
    return kExitFail;
  }
  return c.has_conclusion() ? kExitOk : kExitFail;
}

struct SelmerArgs {
  long l_max = 0;
  std::string l;
  std::string format = "pretty";
};

int run_selmer_table(const SelmerArgs& a) {
  const OutputFormat f = parse_output_format(a.format);
  std::vector<Int> ls;
  if (!a.l.empty()) {
    ls.push_back(parse_int(a.l));
  } else {
    if (a.l_max < 2) throw ArgumentError("give --l or --l-max >= 2");
    for (long q = 2; q <= a.l_max; ++q)
      if (is_prime_u64(static_cast<std::uint64_t>(q))) ls.emplace_back(q);
  }
  if (f == OutputFormat::Csv) std::cout << "l,l_mod16,sel_phi,sel_phihat,dim_phi,dim_phihat,rank_upper,table_bound,match\n";
  if (f == OutputFormat::Pretty)
    std::cout << std::setw(8) << "l" << std::setw(6) << "mod16" << std::setw(8) << "dimphi" << std::setw(10) << "dimphihat"
              << std::setw(7) << "rank<=" << std::setw(7) << "table" << "  Sel(phi) | Sel(phihat)\n";
  int mismatches = 0;
  for (const Int& l : ls) {
    if (!is_prime(l)) throw ArgumentError("l must be prime, got " + l.get_str());
    const SelmerReport r = selmer(l);
    const int bound = theorem_table_bound(l);
    const bool match = bound == r.rank_upper;
    if (!match) ++mismatches;
    auto join = [](const std::vector<Int>& v, const char* sep) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i].get_str();
      return out;
    };
    const unsigned m16 = static_cast<unsigned>(mpz_fdiv_ui(l.get_mpz_t(), 16));
    if (f == OutputFormat::Jsonl) {
      nlohmann::ordered_json j;
      j["schema_version"] = kCertificateSchemaVersion;
      j["l"] = l.get_str();
      j["l_mod16"] = m16;
      nlohmann::ordered_json sp = nlohmann::ordered_json::array(), sh = nlohmann::ordered_json::array();
      for (const auto& d : r.sel_phi) sp.push_back(d.get_str());
      for (const auto& d : r.sel_phihat) sh.push_back(d.get_str());
      j["sel_phi"] = sp;
      j["sel_phihat"] = sh;
      j["dim_phi"] = r.dim_phi;
      j["dim_phihat"] = r.dim_phihat;
      j["rank_upper"] = r.rank_upper;
      j["table_bound"] = bound;
      j["match"] = match;
      std::cout << j.dump() << "\n";
    } else if (f == OutputFormat::Csv) {
      std::cout << l.get_str() << ',' << m16 << ",\"" << join(r.sel_phi, " ") << "\",\"" << join(r.sel_phihat, " ")
                << "\"," << r.dim_phi << ',' << r.dim_phihat << ',' << r.rank_upper << ',' << bound << ','
                << (match ? 1 : 0) << "\n";
    } else {
      std::cout << std::setw(8) << l.get_str() << std::setw(6) << m16 << std::setw(8) << r.dim_phi << std::setw(10)
                << r.dim_phihat << std::setw(7) << r.rank_upper << std::setw(7) << bound << "  {" << join(r.sel_phi, ",")
                << "} | {" << join(r.sel_phihat, ",") << "}" << (match ? "" : "  MISMATCH") << "\n";
    }
  }
  if (mismatches) std::cerr << "selmer-table: " << mismatches << " mismatch(es) against the l mod 16 table\n";
  return mismatches ? kExitFail : kExitOk;
}

struct HeightArgs {
  std::string s, t, a, x, y;
  int k = kDefaultHeightIterations;
  std::string format = "pretty";
};

int run_heights(const HeightArgs& h) {
  const OutputFormat f = parse_output_format(h.format);
  std::optional<Curve> c;
  CurvePoint P = CurvePoint::infinity();
  if (!h.s.empty() || !h.t.empty()) {
    if (h.s.empty() || h.t.empty()) throw ArgumentError("--s and --t go together");
    c = make_family(parse_int(h.s), parse_int(h.t));
    P = family_point(*c);
  } else {
    if (h.a.empty() || h.x.empty() || h.y.empty()) throw ArgumentError("give --s/--t or --a/--x/--y");
    c.emplace(parse_int(h.a));
    auto rat = [](const std::string& v) {
      Rat q;
      if (q.set_str(v, 10) != 0) throw ArgumentError("bad rational '" + v + "'");
      q.canonicalize();
      return q;
    };
    P = c->point(rat(h.x), rat(h.y));
  }
  if (torsion(*c).contains(P)) {
    std::cerr << "heights: " << P.to_string() << " is a torsion point (canonical height 0)\n";
    return kExitFail;
  }
  const SilvermanBounds g = silverman_gaps(*c);
  const HeightInterval hi = canonical_height(*c, P, h.k);
  const double naive = naive_height(P);
  std::optional<double> vy;
  if (kth_power_free(c->a(), 4)) vy = vy_lower_bound(c->a());

  nlohmann::ordered_json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["a"] = c->a().get_str();
  j["point"] = P.to_string();
  j["naive_height"] = naive;
  j["lower_gap"] = g.lower_gap.hi;
  j["upper_gap"] = g.upper_gap.hi;
  j["iterations"] = hi.iterations;
  j["hhat_lo"] = hi.lo;
  j["hhat_hi"] = hi.hi;
  j["vy_lower_bound"] = vy ? nlohmann::ordered_json(*vy) : nlohmann::ordered_json(nullptr);
  if (f == OutputFormat::Pretty) {
    std::cout << std::setprecision(12) << "curve y^2 = x^3 + (" << c->a().get_str() << ")x, P = " << P.to_string() << "\n"
              << "  h(P)            = " << naive << "\n"
              << "  gaps            = -" << g.lower_gap.hi << " .. +" << g.upper_gap.hi << "\n"
              << "  hhat(P) in      [" << hi.lo << ", " << hi.hi << "]  (k = " << hi.iterations << ")\n";
    if (vy) std::cout << "  VY lower bound  = " << *vy << "\n";
  } else if (f == OutputFormat::Csv) {
    std::cout << std::setprecision(17) << "a,point,naive_height,hhat_lo,hhat_hi,iterations\n"
              << c->a().get_str() << ",\"" << P.to_string() << "\"," << naive << ',' << hi.lo << ',' << hi.hi << ','
              << hi.iterations << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divcert: class-number divisibility certificates for y^2 = x^3 - (s^4+t^2)x"};
  app.require_subcommand(1);

  SearchArgs sa;
  auto* search_cmd = app.add_subcommand("search", "enumerate (s, t) and emit passing certificates");
  search_cmd->add_option("--mode", sa.mode, "main | square_subfamily | infinite")->capture_default_str();
  search_cmd->add_option("--p", sa.p, "prime p >= 5")->capture_default_str();
  search_cmd->add_option("--n", sa.n, "exponent n >= 1")->capture_default_str();
  search_cmd->add_option("--s-range", sa.s_range, "LO:HI")->capture_default_str();
  search_cmd->add_option("--t-range", sa.t_range, "LO:HI (tau in square_subfamily mode)")->capture_default_str();
  search_cmd->add_option("--target-count", sa.target, "stop after this many certificates")->capture_default_str();
  search_cmd->add_option("--workers", sa.workers, "worker threads (default: $DIVCERT_WORKERS or 1)");
  search_cmd->add_option("--resume", sa.resume, "checkpoint file (created if missing)");
  search_cmd->add_option("--output", sa.output, "output file (default stdout)");
  search_cmd->add_option("--format", sa.format, "jsonl | csv | pretty")->capture_default_str();
  search_cmd->add_option("--max-candidates", sa.max_candidates, "stop after this many candidates in this run");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "certify a single subject");
  verify_cmd->add_option("--mode", va.mode, "main | square | infinite | rank")->capture_default_str();
  verify_cmd->add_option("--s", va.s, "s");
  verify_cmd->add_option("--t", va.t, "t");
  verify_cmd->add_option("--tau", va.tau, "tau (square mode, t = tau^2)");
  verify_cmd->add_option("--p", va.p, "prime p >= 5")->capture_default_str();
  verify_cmd->add_option("--n", va.n, "exponent n >= 1")->capture_default_str();
  verify_cmd->add_option("--format", va.format, "jsonl | csv | pretty")->capture_default_str();
  verify_cmd->add_option("--output", va.output, "append the JSONL record to this file");

  SelmerArgs sel;
  auto* selmer_cmd = app.add_subcommand("selmer-table", "2-isogeny Selmer data for primes l");
  selmer_cmd->add_option("--l-max", sel.l_max, "all primes 2 <= l <= L");
  selmer_cmd->add_option("--l", sel.l, "a single prime l");
  selmer_cmd->add_option("--format", sel.format, "jsonl | csv | pretty")->capture_default_str();

  HeightArgs ha;
  auto* heights_cmd = app.add_subcommand("heights", "naive and canonical heights");
  heights_cmd->add_option("--s", ha.s, "family parameter s (uses P = (-s^2, st))");
  heights_cmd->add_option("--t", ha.t, "family parameter t");
  heights_cmd->add_option("--a", ha.a, "curve y^2 = x^3 + a x");
  heights_cmd->add_option("--x", ha.x, "x(P), e.g. 9/4");
  heights_cmd->add_option("--y", ha.y, "y(P)");
  heights_cmd->add_option("--k", ha.k, "doubling iterations")->capture_default_str();
  heights_cmd->add_option("--format", ha.format, "jsonl | csv | pretty")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (search_cmd->parsed()) return run_search(sa);
    if (verify_cmd->parsed()) return run_verify(va);
    if (selmer_cmd->parsed()) return run_selmer_table(sel);
    if (heights_cmd->parsed()) return run_heights(ha);
  } catch (const ArgumentError& e) {
    std::cerr << "divcert: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "divcert: internal error: " << e.what() << "\n";
    return 3;
  }
  return kExitUsage;
}
