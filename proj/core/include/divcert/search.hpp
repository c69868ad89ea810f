#pragma once

// Batch search over (s, t): deterministic enumeration, cheap congruence
// filters, parallel certification with an ordered merge, checkpoint/resume.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divcert/arith.hpp"
#include "divcert/certify.hpp"

namespace divcert {

enum class SearchMode { Main, SquareSubfamily, Infinite };
enum class OutputFormat { Jsonl, Csv, Pretty };

std::string_view to_string(SearchMode m);
std::string_view to_string(OutputFormat f);
SearchMode parse_search_mode(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

struct Range {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

// In square_subfamily mode the second coordinate is tau and t = tau^2.
struct SearchConfig {
  SearchMode mode = SearchMode::Main;
  Int p = 5;
  int n = 1;
  Range s_range{1, 60};
  Range t_range{1, 60};
  long target_count = 1;
  int workers = 1;
  std::string resume_path;  // checkpoint file; empty disables checkpointing
  std::string output_path;  // empty writes to the stream passed to search()
  OutputFormat format = OutputFormat::Jsonl;
  // Stop after this many candidates in one run (a simulated interruption).
  std::optional<std::uint64_t> max_candidates;
};

// Throws ArgumentError on an invalid or unsatisfiable configuration.
void validate(const SearchConfig& cfg);

// Hash over the fields that determine the output (not workers or paths).
std::string config_hash(const SearchConfig& cfg);

struct Candidate {
  std::uint64_t index = 0;
  Int s;
  Int t;  // tau in square_subfamily mode
};

// Candidates in search order: increasing max(s, t), then lexicographic.
class CandidateEnumerator {
 public:
  explicit CandidateEnumerator(const SearchConfig& cfg);
  std::optional<Candidate> next();
  void skip_to(std::uint64_t index);

 private:
  void fill();

  Range s_, t_;
  std::int64_t m_;
  std::vector<std::pair<std::int64_t, std::int64_t>> layer_;  // pairs with max(s, t) = m_
  std::size_t pos_ = 0;
  std::uint64_t index_ = 0;
};

// Congruence, gcd and primality filters applied before any certifier.
bool passes_cheap_filters(const SearchConfig& cfg, const Candidate& c);

Certificate certify_candidate(const SearchConfig& cfg, const Candidate& c);

struct Checkpoint {
  std::string config_hash;
  std::uint64_t next_index = 0;
  long emitted = 0;
  std::uint64_t output_bytes = 0;
};

std::optional<Checkpoint> read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const Checkpoint& cp);

struct SearchResult {
  std::vector<Certificate> certificates;  // emitted during this run
  long total_emitted = 0;                 // including earlier runs when resumed
  std::uint64_t next_index = 0;
  std::uint64_t candidates_examined = 0;
  std::uint64_t candidates_certified = 0;
  bool target_reached = false;
  bool interrupted = false;
  bool resumed = false;
};

// Writes records to cfg.output_path, or to `out` when no path is set.
SearchResult search(const SearchConfig& cfg, std::ostream* out = nullptr);

std::string format_record(const Certificate& c, OutputFormat f);

}  // namespace divcert
