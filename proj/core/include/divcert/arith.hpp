#pragma once

// Exact integer/rational primitives, p-adic helpers and outward-rounded
// floating-point enclosures used across the library.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace divcert {

using Int = mpz_class;
// mpq_class keeps values canonical (den > 0, gcd = 1) under arithmetic;
// construct from a numerator/denominator pair only through make_rat().
using Rat = mpq_class;

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A violated precondition with a stable, machine-readable reason name.
class PreconditionError : public ArgumentError {
 public:
  PreconditionError(std::string reason, const std::string& detail)
      : ArgumentError(reason + ": " + detail), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

Rat make_rat(const Int& num, const Int& den);
std::string to_string(const Int& n);
std::string to_string(const Rat& q);
Int parse_int(std::string_view text);

// v_p value; empty means +infinity (valuation of zero).
class Valuation {
 public:
  static Valuation infinite() { return Valuation{}; }
  static Valuation finite(long v) { return Valuation{v}; }

  bool is_infinite() const { return !value_.has_value(); }
  long value() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend Valuation operator+(const Valuation& a, const Valuation& b);
  friend bool operator<(const Valuation& a, const Valuation& b);

 private:
  Valuation() = default;
  explicit Valuation(long v) : value_(v) {}
  std::optional<long> value_;
};

std::string to_string(const Valuation& v);

// A place of Q: the real place or a finite prime.
struct Place {
  enum class Kind { Real, Prime };
  Kind kind = Kind::Real;
  Int prime;

  static Place real() { return Place{}; }
  static Place at(const Int& p);
  bool is_real() const { return kind == Kind::Real; }
  std::string name() const;
};

Valuation vp(const Rat& x, const Int& p);
// Valuation of a nonzero integer, without the primality check of vp().
long vp_unchecked(const Int& n, const Int& p);

enum class PrimalityMethod {
  Trivial,                   // n < 4 or even
  DeterministicMillerRabin,  // n < 2^64, fixed base set
  BailliePSW,                // strong base-2 SPRP + strong Lucas; probabilistic status
};

struct PrimalityVerdict {
  bool prime = false;
  PrimalityMethod method = PrimalityMethod::Trivial;
};

std::string_view to_string(PrimalityMethod m);

PrimalityVerdict primality(const Int& n);
inline bool is_prime(const Int& n) { return primality(n).prime; }
bool is_prime_u64(std::uint64_t n);

bool kth_power_free(const Int& n, int k);
// Largest m with m^k | n is divided out; returns the k-th-power-free part
// (with the sign of n) and the removed root m.
struct PowerFreePart {
  Int free_part;
  Int root;
};
PowerFreePart kth_power_free_part(const Int& n, int k);

bool is_square(const Rat& x);
bool is_square(const Int& n);
Int isqrt(const Int& n);

// True iff x is a square in the completion of Q at the place.
bool square_class_local(const Rat& x, const Place& place);
// True iff x is a fourth power in the completion of Q at the place.
bool fourth_power_local(const Rat& x, const Place& place);

// Legendre symbol (a/p) for an odd prime p.
int legendre(const Int& a, const Int& p);

// ---------------------------------------------------------------------------
// Outward-rounded real enclosures.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Requires b not containing zero.
Interval operator/(const Interval& a, const Interval& b);
Interval scale(const Interval& a, double c);

// Enclosure of a decimal constant given as a double literal.
Interval constant(double v);
// Enclosure of ln|n| for n != 0.
Interval log_abs(const Int& n);
Interval ln2();

}  // namespace divcert
