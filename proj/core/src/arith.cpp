#include "divcert/arith.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace divcert {

namespace {

double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

bool strong_probable_prime(u64 n, u64 base) {
  base %= n;
  if (base == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const Int& n, const Int& base) {
  Int d = n - 1;
  mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Int x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Int nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == nm1) return true;
  }
  return false;
}

// Halving modulo an odd n.
void half_mod(Int& v, const Int& n) {
  if (mpz_odd_p(v.get_mpz_t())) v += n;
  v /= 2;
  v %= n;
}

// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
bool strong_lucas_probable_prime(const Int& n) {
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  long dd = 5;
  for (;;) {
    Int d(dd);
    int j = mpz_jacobi(d.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && abs(d) != n) return false;
    dd = dd > 0 ? -(dd + 2) : -dd + 2;
  }
  const Int D(dd);
  const Int Q = Int(1 - dd) / 4;

  Int k = n + 1;
  mp_bitcnt_t s = mpz_scan1(k.get_mpz_t(), 0);
  Int odd = k;
  mpz_fdiv_q_2exp(odd.get_mpz_t(), odd.get_mpz_t(), s);

  Int U = 1, V = 1, Qk = Q;  // index 1
  auto mod = [&](Int& v) {
    v %= n;
    if (v < 0) v += n;
  };
  mod(Qk);
  const size_t bits = mpz_sizeinbase(odd.get_mpz_t(), 2);
  for (size_t i = bits - 1; i-- > 0;) {
    // double
    U = U * V;
    mod(U);
    V = V * V - 2 * Qk;
    mod(V);
    Qk = Qk * Qk;
    mod(Qk);
    if (mpz_tstbit(odd.get_mpz_t(), i)) {
      Int U2 = U + V;
      Int V2 = D * U + V;
      mod(U2);
      mod(V2);
      half_mod(U2, n);
      half_mod(V2, n);
      U = U2;
      V = V2;
      Qk = Qk * Q;
      mod(Qk);
    }
  }
  if (U == 0 || V == 0) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    V = V * V - 2 * Qk;
    mod(V);
    if (V == 0) return true;
    Qk = Qk * Qk;
    mod(Qk);
  }
  return false;
}

}  // namespace

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Int& n) { return n.get_str(); }
std::string to_string(const Rat& q) { return q.get_str(); }

Int parse_int(std::string_view text) {
  Int n;
  std::string s(text);
  if (s.empty() || n.set_str(s, 10) != 0) throw ArgumentError("not a decimal integer: '" + s + "'");
  return n;
}

long Valuation::value() const {
  if (!value_) throw std::logic_error("value() of infinite valuation");
  return *value_;
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return Valuation::infinite();
  return Valuation::finite(*a.value_ + *b.value_);
}

bool operator<(const Valuation& a, const Valuation& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return *a.value_ < *b.value_;
}

std::string to_string(const Valuation& v) {
  return v.is_infinite() ? std::string("inf") : std::to_string(v.value());
}

Place Place::at(const Int& p) {
  if (!is_prime(p)) throw ArgumentError("place: " + p.get_str() + " is not prime");
  return Place{Kind::Prime, p};
}

std::string Place::name() const { return is_real() ? std::string("R") : "Q_" + prime.get_str(); }

long vp_unchecked(const Int& n, const Int& p) {
  if (n == 0) throw ArgumentError("vp_unchecked of zero");
  Int rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

Valuation vp(const Rat& x, const Int& p) {
  if (p < 2 || !is_prime(p)) throw ArgumentError("vp: " + p.get_str() + " is not prime");
  if (x == 0) return Valuation::infinite();
  return Valuation::finite(vp_unchecked(x.get_num(), p) - vp_unchecked(x.get_den(), p));
}

std::string_view to_string(PrimalityMethod m) {
  switch (m) {
    case PrimalityMethod::Trivial: return "trivial";
    case PrimalityMethod::DeterministicMillerRabin: return "deterministic-miller-rabin-64";
    case PrimalityMethod::BailliePSW: return "baillie-psw";
  }
  return "?";
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> small{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : small) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Bases proven sufficient for all n < 2^64 (Jim Sinclair).
  static constexpr std::array<u64, 7> bases{2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (u64 b : bases)
    if (!strong_probable_prime(n, b)) return false;
  return true;
}

PrimalityVerdict primality(const Int& n) {
  if (n < 4) return {n >= 2, PrimalityMethod::Trivial};
  if (mpz_even_p(n.get_mpz_t())) return {false, PrimalityMethod::Trivial};
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    static_assert(sizeof(unsigned long) == sizeof(u64));
    return {is_prime_u64(n.get_ui()), PrimalityMethod::DeterministicMillerRabin};
  }
  for (unsigned long q : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul})
    if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return {false, PrimalityMethod::BailliePSW};
  bool prime = strong_probable_prime(n, Int(2)) && strong_lucas_probable_prime(n);
  return {prime, PrimalityMethod::BailliePSW};
}

PowerFreePart kth_power_free_part(const Int& n, int k) {
  if (n == 0) throw ArgumentError("kth_power_free: n = 0");
  if (k < 2) throw ArgumentError("kth_power_free: k < 2");
  Int rest = abs(n);
  Int free_part = 1;
  Int root = 1;
  Int qk;
  for (unsigned long q = 2;; q = (q == 2 ? 3 : q + 2)) {
    mpz_ui_pow_ui(qk.get_mpz_t(), q, static_cast<unsigned long>(k));
    if (qk > rest) break;
    int e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), q)) {
      rest /= q;
      ++e;
    }
    for (int i = 0; i < e / k; ++i) root *= q;
    for (int i = 0; i < e % k; ++i) free_part *= q;
  }
  // Every prime left in `rest` exceeds rest^{1/k}, so it occurs to a power < k.
  free_part *= rest;
  if (n < 0) free_part = -free_part;
  return {free_part, root};
}

bool kth_power_free(const Int& n, int k) { return kth_power_free_part(n, k).root == 1; }

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

bool is_square(const Rat& x) { return is_square(x.get_num()) && is_square(x.get_den()); }

Int isqrt(const Int& n) {
  if (n < 0) throw ArgumentError("isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

int legendre(const Int& a, const Int& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

namespace {

// Splits nonzero x = p^v * u with u a p-adic unit (as a rational).
std::pair<long, Rat> split_unit(const Rat& x, const Int& p) {
  Int num = x.get_num(), den = x.get_den();
  long v = 0;
  v += static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()));
  v -= static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()));
  return {v, make_rat(num, den)};
}

// Residue of a p-adic unit u = num/den modulo m (m a power of p).
Int unit_residue(const Rat& u, const Int& m) {
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), u.get_den().get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::logic_error("unit_residue: denominator not invertible");
  Int r = u.get_num() * inv % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

bool square_class_local(const Rat& x, const Place& place) {
  if (x == 0) throw ArgumentError("square_class_local: x = 0");
  if (place.is_real()) return x > 0;
  const Int& p = place.prime;
  auto [v, u] = split_unit(x, p);
  if (v % 2 != 0) return false;
  if (p == 2) return unit_residue(u, Int(8)) == 1;
  return legendre(unit_residue(u, p), p) == 1;
}

bool fourth_power_local(const Rat& x, const Place& place) {
  if (x == 0) throw ArgumentError("fourth_power_local: x = 0");
  if (place.is_real()) return x > 0;
  const Int& p = place.prime;
  auto [v, u] = split_unit(x, p);
  if (v % 4 != 0) return false;
  if (p == 2) return unit_residue(u, Int(16)) == 1;
  // Unit group of F_p is cyclic of order p-1; Hensel lifts simple roots.
  Int r = unit_residue(u, p);
  const unsigned long g = mpz_fdiv_ui(p.get_mpz_t(), 4) == 1 ? 4 : 2;  // gcd(4, p - 1)
  Int e = (p - 1) / g;
  Int res;
  mpz_powm(res.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  return res == 1;
}

// ---------------------------------------------------------------------------

Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = c[0], hi = c[0];
  for (double v : c) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {down(lo), up(hi)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) throw ArgumentError("interval division by an interval containing 0");
  const double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  double lo = c[0], hi = c[0];
  for (double v : c) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {down(lo), up(hi)};
}

Interval scale(const Interval& a, double c) { return a * Interval::point(c); }

Interval constant(double v) { return {down(v), up(v)}; }

Interval ln2() { return {down(M_LN2), up(M_LN2)}; }

Interval log_abs(const Int& n) {
  if (n == 0) throw ArgumentError("log of zero");
  if (n == 1 || n == -1) return Interval::point(0.0);
  signed long exp = 0;
  // |d| in [0.5, 1), truncated toward zero from the exact mantissa.
  const double d = std::fabs(mpz_get_d_2exp(&exp, n.get_mpz_t()));
  const double l = std::log(d);
  Interval mant{down(down(l)), up(up(l + 2.3e-16))};
  return mant + Interval::point(static_cast<double>(exp)) * ln2();
}

}  // namespace divcert
