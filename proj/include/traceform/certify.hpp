#pragma once

#include "traceform/numeric.hpp"

#include <mpfr.h>

namespace traceform {

// Closed interval with exact rational endpoints. The transcendental steps
// (logarithms) are bracketed by MPFR with directed rounding and immediately
// converted to exact rationals, so every comparison downstream is exact.
struct RatInterval {
  Rat lo, hi;

  RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
  RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }

  RatInterval scaled(const Rat& c) const {
    if (c >= 0) return {c * lo, c * hi};
    return {c * hi, c * lo};
  }

  bool certainly_negative() const { return hi < 0; }
  bool certainly_positive() const { return lo > 0; }
  Rat width() const { return hi - lo; }
};

// The exact rational equal to an MPFR number (every finite MPFR value is a
// dyadic rational).
inline Rat rat_from_mpfr(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return Rat(0);
  if (!mpfr_number_p(x)) throw std::domain_error("non-finite value in certificate bracket");
  Int z;
  mpfr_exp_t e2 = mpfr_get_z_2exp(z.get_mpz_t(), x);
  if (e2 >= 0) {
    Int num = z << static_cast<unsigned long>(e2);
    return Rat(std::move(num));
  }
  Int den = Int(1) << static_cast<unsigned long>(-e2);
  return make_rat(std::move(z), std::move(den));
}

// [lo, hi] containing ln(x) for an integer x >= 1.
inline RatInterval log_interval(const Int& x, mpfr_prec_t prec = 128) {
  if (x < 1) throw std::domain_error("log bracket needs x >= 1");
  mpfr_t v, l;
  mpfr_init2(v, prec);
  mpfr_init2(l, prec);
  RatInterval out;

  mpfr_set_z(v, x.get_mpz_t(), MPFR_RNDD);
  mpfr_log(l, v, MPFR_RNDD);
  out.lo = rat_from_mpfr(l);

  mpfr_set_z(v, x.get_mpz_t(), MPFR_RNDU);
  mpfr_log(l, v, MPFR_RNDU);
  out.hi = rat_from_mpfr(l);

  mpfr_clear(v);
  mpfr_clear(l);
  return out;
}

}  // namespace traceform
