#include "divcert/search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

namespace divcert {

namespace {

constexpr std::size_t kBatchSize = 256;
constexpr std::string_view kCheckpointMagic = "divcert-checkpoint 1";

Int pow_ui(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool divides(const Int& d, const Int& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

// Some multiple of q lies in [lo, hi].
bool has_multiple(const Range& r, const Int& q) {
  const Int first = ((Int(r.lo) + q - 1) / q) * q;
  return first <= r.hi;
}

// Some element of [lo, hi] is prime to the prime p.
bool has_non_multiple(const Range& r, const Int& p) {
  return r.hi > r.lo || !divides(p, Int(r.lo));
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string_view to_string(SearchMode m) {
  switch (m) {
    case SearchMode::Main: return "main";
    case SearchMode::SquareSubfamily: return "square_subfamily";
    case SearchMode::Infinite: return "infinite";
  }
  return "";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Jsonl: return "jsonl";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Pretty: return "pretty";
  }
  return "";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "main") return SearchMode::Main;
  if (text == "square_subfamily" || text == "square") return SearchMode::SquareSubfamily;
  if (text == "infinite") return SearchMode::Infinite;
  throw ArgumentError("unknown mode '" + std::string(text) + "'");
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "jsonl") return OutputFormat::Jsonl;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "pretty") return OutputFormat::Pretty;
  throw ArgumentError("unknown format '" + std::string(text) + "'");
}

void validate(const SearchConfig& cfg) {
  if (cfg.p < 5 || !is_prime(cfg.p)) throw ArgumentError("p must be a prime >= 5, got " + cfg.p.get_str());
  if (cfg.n < 1) throw ArgumentError("n must be >= 1");
  if (cfg.target_count < 1) throw ArgumentError("target_count must be >= 1");
  if (cfg.workers < 1) throw ArgumentError("workers must be >= 1");
  for (const Range* r : {&cfg.s_range, &cfg.t_range})
    if (r->lo < 1 || r->lo > r->hi) throw ArgumentError("ranges must satisfy 1 <= lo <= hi");
  if (cfg.mode == SearchMode::SquareSubfamily && cfg.n != 1) throw ArgumentError("square_subfamily mode requires n = 1");

  // p^{n+1} | st with p dividing exactly one coordinate means the full power sits in one of them.
  const Int q = pow_ui(cfg.p, static_cast<unsigned long>(cfg.mode == SearchMode::SquareSubfamily ? 2 : cfg.n + 1));
  const bool via_s = has_multiple(cfg.s_range, q) && has_non_multiple(cfg.t_range, cfg.p);
  const bool via_t = has_multiple(cfg.t_range, q) && has_non_multiple(cfg.s_range, cfg.p);
  if (!via_s && !via_t)
    throw ArgumentError("unsatisfiable configuration: no pair in range has " + q.get_str() +
                        " dividing the product with p dividing exactly one coordinate");
}

std::string config_hash(const SearchConfig& cfg) {
  std::ostringstream os;
  os << to_string(cfg.mode) << '|' << cfg.p.get_str() << '|' << cfg.n << '|' << cfg.s_range.lo << ':' << cfg.s_range.hi
     << '|' << cfg.t_range.lo << ':' << cfg.t_range.hi << '|' << cfg.target_count << '|' << to_string(cfg.format) << "|schema"
     << kCertificateSchemaVersion;
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << fnv1a(os.str());
  return hex.str();
}

// ---------------------------------------------------------------------------

CandidateEnumerator::CandidateEnumerator(const SearchConfig& cfg)
    : s_(cfg.s_range), t_(cfg.t_range), m_(std::max(cfg.s_range.lo, cfg.t_range.lo)) {
  fill();
}

void CandidateEnumerator::fill() {
  const std::int64_t m_max = std::max(s_.hi, t_.hi);
  layer_.clear();
  pos_ = 0;
  for (; m_ <= m_max && layer_.empty(); ++m_) {
    if (t_.lo <= m_ && m_ <= t_.hi)
      for (std::int64_t s = s_.lo; s < m_ && s <= s_.hi; ++s) layer_.emplace_back(s, m_);
    if (s_.lo <= m_ && m_ <= s_.hi)
      for (std::int64_t t = t_.lo; t <= m_ && t <= t_.hi; ++t) layer_.emplace_back(m_, t);
  }
}

std::optional<Candidate> CandidateEnumerator::next() {
  if (pos_ == layer_.size()) fill();
  if (layer_.empty()) return std::nullopt;
  const auto [s, t] = layer_[pos_++];
  return Candidate{index_++, Int(static_cast<long>(s)), Int(static_cast<long>(t))};
}

void CandidateEnumerator::skip_to(std::uint64_t index) {
  while (index_ < index && next()) {
  }
}

// ---------------------------------------------------------------------------

bool passes_cheap_filters(const SearchConfig& cfg, const Candidate& c) {
  Int g;
  mpz_gcd(g.get_mpz_t(), c.s.get_mpz_t(), c.t.get_mpz_t());
  if (g != 1) return false;
  const Int& p = cfg.p;
  if (divides(p, c.s) == divides(p, c.t)) return false;
  const Int q = pow_ui(p, static_cast<unsigned long>(cfg.mode == SearchMode::SquareSubfamily ? 2 : cfg.n + 1));
  if (!divides(q, c.s * c.t)) return false;
  if (cfg.mode == SearchMode::Infinite) {
    if (!mpz_even_p(c.s.get_mpz_t())) return false;
    const unsigned long t8 = mpz_fdiv_ui(c.t.get_mpz_t(), 8);
    if (t8 != 3 && t8 != 5) return false;
    const Int s2 = c.s * c.s;
    if (!is_prime(s2 * s2 + c.t * c.t)) return false;
  }
  return true;
}

Certificate certify_candidate(const SearchConfig& cfg, const Candidate& c) {
  switch (cfg.mode) {
    case SearchMode::Main: return certify_main(c.s, c.t, cfg.p, cfg.n);
    case SearchMode::SquareSubfamily: return certify_square_subfamily(c.s, c.t, cfg.p);
    case SearchMode::Infinite: return certify_infinite_instance(c.s, c.t, cfg.p, cfg.n);
  }
  throw std::logic_error("unreachable search mode");
}

std::string format_record(const Certificate& c, OutputFormat f) {
  switch (f) {
    case OutputFormat::Jsonl: return to_jsonl(c) + "\n";
    case OutputFormat::Csv: return to_csv(c) + "\n";
    case OutputFormat::Pretty: return to_pretty(c);
  }
  return "";
}

// ---------------------------------------------------------------------------

std::optional<Checkpoint> read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic) throw ArgumentError("malformed checkpoint file " + path);
  Checkpoint cp;
  bool seen[4] = {false, false, false, false};
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "config_hash") seen[0] = static_cast<bool>(ls >> cp.config_hash);
    else if (key == "next_index") seen[1] = static_cast<bool>(ls >> cp.next_index);
    else if (key == "emitted") seen[2] = static_cast<bool>(ls >> cp.emitted);
    else if (key == "output_bytes") seen[3] = static_cast<bool>(ls >> cp.output_bytes);
  }
  for (bool b : seen)
    if (!b) throw ArgumentError("malformed checkpoint file " + path);
  return cp;
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << kCheckpointMagic << "\n"
        << "config_hash " << cp.config_hash << "\n"
        << "next_index " << cp.next_index << "\n"
        << "emitted " << cp.emitted << "\n"
        << "output_bytes " << cp.output_bytes << "\n";
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

SearchResult search(const SearchConfig& cfg, std::ostream* out) {
  validate(cfg);
  SearchResult result;
  Checkpoint cp;
  cp.config_hash = config_hash(cfg);

  if (!cfg.resume_path.empty()) {
    if (auto prev = read_checkpoint(cfg.resume_path)) {
      if (prev->config_hash != cp.config_hash)
        throw ArgumentError("checkpoint " + cfg.resume_path + " was written for a different configuration");
      cp = *prev;
      result.resumed = true;
    }
  }

  std::ofstream file;
  if (!cfg.output_path.empty()) {
    if (result.resumed) {
      if (!std::filesystem::exists(cfg.output_path)) throw ArgumentError("resume: output file missing: " + cfg.output_path);
      std::filesystem::resize_file(cfg.output_path, cp.output_bytes);
      file.open(cfg.output_path, std::ios::app | std::ios::binary);
    } else {
      file.open(cfg.output_path, std::ios::trunc | std::ios::binary);
    }
    if (!file) throw ArgumentError("cannot open output " + cfg.output_path);
    out = &file;
  }

  auto write = [&](const std::string& text) {
    if (out) {
      *out << text;
      out->flush();
    }
    cp.output_bytes += text.size();
  };
  auto save = [&] {
    if (!cfg.resume_path.empty()) write_checkpoint(cfg.resume_path, cp);
  };

  if (cfg.format == OutputFormat::Csv && cp.output_bytes == 0) write(csv_header() + "\n");
  result.total_emitted = cp.emitted;
  result.target_reached = cp.emitted >= cfg.target_count;

  CandidateEnumerator en(cfg);
  en.skip_to(cp.next_index);
  const std::uint64_t limit = cfg.max_candidates.value_or(std::numeric_limits<std::uint64_t>::max());
  std::uint64_t taken = 0;

  while (!result.target_reached) {
    std::vector<Candidate> batch;
    while (batch.size() < kBatchSize && taken < limit) {
      auto c = en.next();
      if (!c) break;
      batch.push_back(std::move(*c));
      ++taken;
    }
    if (batch.empty()) {
      result.interrupted = taken >= limit && en.next().has_value();
      break;
    }

    std::vector<std::optional<Certificate>> certs(batch.size());
    std::vector<std::exception_ptr> errors(batch.size());
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
      for (std::size_t i = cursor++; i < batch.size(); i = cursor++) {
        try {
          if (passes_cheap_filters(cfg, batch[i])) certs[i] = certify_candidate(cfg, batch[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const int nthreads = std::min<int>(cfg.workers, static_cast<int>(batch.size()));
    if (nthreads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < nthreads; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      ++result.candidates_examined;
      cp.next_index = batch[i].index + 1;
      if (!certs[i]) continue;
      ++result.candidates_certified;
      if (!certs[i]->has_conclusion()) continue;
      write(format_record(*certs[i], cfg.format));
      result.certificates.push_back(std::move(*certs[i]));
      ++cp.emitted;
      save();
      if (cp.emitted >= cfg.target_count) {
        result.target_reached = true;
        break;
      }
    }
    save();
  }

  result.total_emitted = cp.emitted;
  result.next_index = cp.next_index;
  return result;
}

}  // namespace divcert
