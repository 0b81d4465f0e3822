#pragma once

#include "traceform/numeric.hpp"

namespace traceform {

// Parameters of the abelian field K of conductor p^r (p an odd prime)
// with [Q(zeta_{p^r}) : K] = e. Immutable once built; every derived
// quantity is recomputed nowhere else.
struct FieldParams {
  Int p;            // odd prime
  unsigned r = 1;   // conductor exponent, >= 1
  Int e;            // divisor of p - 1

  Int n;            // [K : Q] = p^{r-1} (p-1) / e
  Int d;            // (p - 1) / e
  Int phi;          // phi(p^r) = p^{r-1} (p - 1)
  Int conductor;    // p^r
  bool totally_real = false;  // iff e is even (then -1 lies in H)

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

inline FieldParams make_field_params(Int p, unsigned r, Int e) {
  if (p <= 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  if (e < 1) throw std::invalid_argument("e must be a positive divisor of p - 1");
  if ((p - 1) % e != 0) throw std::invalid_argument("e must divide p - 1");
  FieldParams fp;
  fp.p = std::move(p);
  fp.r = r;
  fp.e = std::move(e);
  fp.d = (fp.p - 1) / fp.e;
  fp.phi = phi_prime_power(fp.p, r);
  fp.conductor = pow_int(fp.p, r);
  fp.n = fp.phi / fp.e;
  fp.totally_real = mpz_even_p(fp.e.get_mpz_t()) != 0;
  return fp;
}

// (p^{r-1} - 1)/e, exact: p = 1 (mod e) makes e | p^{r-1} - 1.
// Equals n * delta where delta is the discriminant defect, and counts the
// nonzero fibers of the projection to Z/p^{r-1}.
inline Int delta_n_value(const FieldParams& fp) {
  Int num = pow_int(fp.p, fp.r - 1) - 1;
  if (num % fp.e != 0) throw std::logic_error("e does not divide p^{r-1} - 1");
  return num / fp.e;
}

// Exponent of p in det(O_K, q): the trace-form discriminant is p^upsilon
// with upsilon = r n - (p^{r-1} - 1)/e - 1.
inline Int upsilon(const FieldParams& fp) {
  return Int(fp.r) * fp.n - delta_n_value(fp) - 1;
}

}  // namespace traceform
