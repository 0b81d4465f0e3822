#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace traceform {

// Exact integer / rational scalars used throughout. All certificate-bearing
// quantities are one of these two types; doubles appear only in display
// fields and in the randomized deep-hole search.
using Int = mpz_class;
using Rat = mpq_class;

// mpq_class(num, den) does not reduce; this is the one constructor we allow.
inline Rat make_rat(Int num, Int den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

inline Int pow_int(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Rat pow_rat(const Rat& base, unsigned long exp) {
  // base is canonical, so num^k/den^k is already canonical
  Rat q(pow_int(base.get_num(), exp), pow_int(base.get_den(), exp));
  return q;
}

inline unsigned long to_ulong(const Int& x, const char* what) {
  if (x < 0 || !x.fits_ulong_p())
    throw std::overflow_error(std::string(what) + " does not fit in an unsigned long");
  return x.get_ui();
}

inline std::uint64_t to_u64(const Int& x, const char* what) {
  return static_cast<std::uint64_t>(to_ulong(x, what));
}

inline bool is_prime(const Int& x) {
  // 32 Miller-Rabin/BPSW rounds: deterministic for everything < 2^64 and
  // far beyond any error probability that could matter above that
  return mpz_probab_prime_p(x.get_mpz_t(), 32) > 0;
}

inline Int phi_prime_power(const Int& p, unsigned k) {
  if (k == 0) return Int(1);
  return pow_int(p, k - 1) * (p - 1);
}

// Distinct prime factors by trial division. Intended for the small
// cofactors that show up here (p - 1 with p at most a few million).
inline std::vector<Int> distinct_prime_factors(Int m) {
  if (m < 1) throw std::invalid_argument("factoring a nonpositive integer");
  std::vector<Int> out;
  Int d = 2;
  while (d * d <= m) {
    if (m % d == 0) {
      out.push_back(d);
      while (m % d == 0) m /= d;
    }
    ++d;
  }
  if (m > 1) out.push_back(m);
  return out;
}

inline std::vector<Int> divisors_ascending(const Int& m) {
  if (m < 1) throw std::invalid_argument("divisors of a nonpositive integer");
  std::vector<Int> small, large;
  Int d = 1;
  while (d * d <= m) {
    if (m % d == 0) {
      small.push_back(d);
      if (d * d != m) large.push_back(m / d);
    }
    ++d;
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

// log2 of a positive integer/rational, good to double precision regardless
// of magnitude (mpz_get_d would overflow past ~2^1024).
inline double log2_of(const Int& x) {
  if (x <= 0) throw std::domain_error("log2 of a nonpositive integer");
  signed long exp2;
  double m = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log2(m) + static_cast<double>(exp2);
}

inline double log2_of(const Rat& q) {
  return log2_of(q.get_num()) - log2_of(q.get_den());
}

// q^power as a double via logs; safe for rationals whose numerator or
// denominator is far outside double range.
inline double pow_to_double(const Rat& q, double power) {
  if (q == 0) return 0.0;
  return std::exp2(log2_of(q) * power);
}

inline std::string dec_string(const Int& x) { return x.get_str(10); }

}  // namespace traceform
