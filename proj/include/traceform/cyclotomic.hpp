#pragma once

#include "traceform/gram.hpp"
#include "traceform/period_basis.hpp"
#include "traceform/residue_orbits.hpp"

#include <cstdint>
#include <vector>

namespace traceform {

// Exact element of Z[zeta], zeta a primitive p^r-th root of unity, stored on
// the power basis 1, zeta, ..., zeta^{phi-1} in canonical reduced form.
// Everything here is computed from first principles (polynomial arithmetic
// mod the p^r-th cyclotomic polynomial and full Galois sums); this module is
// the independent witness the structural formulas are checked against, so it
// deliberately knows nothing about orbits beyond their element lists.
struct CycInt {
  std::uint64_t conductor = 0;
  std::vector<Int> coeffs;  // length phi(p^r)

  friend bool operator==(const CycInt&, const CycInt&) = default;
};

class CyclotomicRing {
 public:
  explicit CyclotomicRing(FieldParams fp) : params_(std::move(fp)) {
    if (params_.conductor >= (Int(1) << 62))
      throw std::overflow_error("conductor too large for dense cyclotomic arithmetic");
    pr_ = to_u64(params_.conductor, "conductor");
    p_ = to_u64(params_.p, "p");
    pr1_ = pr_ / p_;
    phi_ = to_u64(params_.phi, "phi");
    units_.reserve(phi_);
    for (std::uint64_t u = 0; u < pr_; ++u)
      if (u % p_ != 0) units_.push_back(u);
  }

  const FieldParams& params() const { return params_; }

  CycInt zero() const { return CycInt{pr_, std::vector<Int>(phi_)}; }

  CycInt one() const {
    CycInt a = zero();
    a.coeffs[0] = 1;
    return a;
  }

  CycInt from_int(const Int& c) const {
    CycInt a = zero();
    a.coeffs[0] = c;
    return a;
  }

  // zeta^j for any integer j; exponents >= phi are rewritten through
  // zeta^{phi+u} = -(zeta^u + zeta^{p^{r-1}+u} + ... + zeta^{(p-2)p^{r-1}+u})
  CycInt zeta_power(const Int& j) const {
    Int jr;
    mpz_mod(jr.get_mpz_t(), j.get_mpz_t(), params_.conductor.get_mpz_t());
    std::vector<Int> full(pr_);
    full[to_u64(jr, "zeta exponent")] = 1;
    return reduce(std::move(full));
  }

  CycInt add(const CycInt& a, const CycInt& b) const {
    check_same(a, b);
    CycInt c = a;
    for (std::size_t k = 0; k < c.coeffs.size(); ++k) c.coeffs[k] += b.coeffs[k];
    return c;
  }

  CycInt sub(const CycInt& a, const CycInt& b) const {
    check_same(a, b);
    CycInt c = a;
    for (std::size_t k = 0; k < c.coeffs.size(); ++k) c.coeffs[k] -= b.coeffs[k];
    return c;
  }

  CycInt neg(const CycInt& a) const {
    CycInt c = a;
    for (Int& x : c.coeffs) x = -x;
    return c;
  }

  CycInt mul(const CycInt& a, const CycInt& b) const {
    check_same(a, b);
    std::vector<Int> full(pr_);
    for (std::uint64_t i = 0; i < phi_; ++i) {
      if (a.coeffs[i] == 0) continue;
      for (std::uint64_t j = 0; j < phi_; ++j) {
        if (b.coeffs[j] == 0) continue;
        std::uint64_t k = i + j;
        if (k >= pr_) k -= pr_;  // zeta^{p^r} = 1
        mpz_addmul(full[k].get_mpz_t(), a.coeffs[i].get_mpz_t(),
                   b.coeffs[j].get_mpz_t());
      }
    }
    return reduce(std::move(full));
  }

  // The automorphism zeta -> zeta^u for a unit u mod p^r.
  CycInt galois(const CycInt& a, std::uint64_t u) const {
    check_conductor(a);
    if (u % p_ == 0) throw std::invalid_argument("Galois exponent must be a unit");
    std::vector<Int> full(pr_);
    for (std::uint64_t k = 0; k < phi_; ++k) {
      if (a.coeffs[k] == 0) continue;
      full[detail::mulmod(k, u, pr_)] += a.coeffs[k];
    }
    return reduce(std::move(full));
  }

  CycInt conj(const CycInt& a) const { return galois(a, pr_ - 1); }

  // Absolute trace: the sum over the full Galois group. The result of
  // summing all conjugates must be a rational integer sitting in the
  // constant coefficient; anything else is a hard error.
  Int trace_to_Q(const CycInt& a) const {
    check_conductor(a);
    std::vector<Int> full(pr_);
    for (std::uint64_t u : units_)
      for (std::uint64_t k = 0; k < phi_; ++k) {
        if (a.coeffs[k] == 0) continue;
        full[detail::mulmod(k, u, pr_)] += a.coeffs[k];
      }
    CycInt t = reduce(std::move(full));
    for (std::uint64_t k = 1; k < phi_; ++k)
      if (t.coeffs[k] != 0) throw std::logic_error("trace is not a rational integer");
    return t.coeffs[0];
  }

  // Gaussian period f_x = sum_{h in H} zeta^{h x}; over the zero orbit this
  // is the constant |H| = e.
  CycInt period(const OrbitSpace& space, const Orbit& x) const {
    std::vector<Int> full(pr_);
    for (std::uint64_t h : space.H())
      full[detail::mulmod(h, x.representative, pr_)] += 1;
    return reduce(std::move(full));
  }

  // The trace-form Gram matrix on the period basis, computed entry by entry
  // as Tr(f_x conj(f_y))/e with the division checked exact. Every entry is
  // computed independently (no symmetry shortcut), so symmetry of the result
  // is evidence, not construction.
  GramMatrix gram_oracle(const OrbitSpace& space, const PeriodBasis& basis) const {
    const std::size_t n = basis.a_orbits.size();
    std::vector<CycInt> f, fbar;
    f.reserve(n);
    fbar.reserve(n);
    for (std::uint32_t id : basis.a_orbits) {
      f.push_back(period(space, space.orbits()[id]));
      fbar.push_back(conj(f.back()));
    }
    GramMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Int t = trace_to_Q(mul(f[i], fbar[j]));
        if (!mpz_divisible_p(t.get_mpz_t(), params_.e.get_mpz_t()))
          throw std::logic_error("absolute trace not divisible by e");
        g.at(i, j) = Rat(t / params_.e);
      }
    return g;
  }

 private:
  void check_conductor(const CycInt& a) const {
    if (a.conductor != pr_ || a.coeffs.size() != phi_)
      throw std::invalid_argument("element belongs to a different cyclotomic ring");
  }

  void check_same(const CycInt& a, const CycInt& b) const {
    check_conductor(a);
    check_conductor(b);
  }

  // Canonical form from a full exponent vector over 0..p^r-1: for each
  // exponent phi + u (u < p^{r-1}), subtract the relation row of the
  // cyclotomic polynomial. Single pass, no cascading: u stays below phi.
  CycInt reduce(std::vector<Int> full) const {
    CycInt out{pr_, std::vector<Int>(full.begin(),
                                     full.begin() + static_cast<std::ptrdiff_t>(phi_))};
    for (std::uint64_t k = phi_; k < pr_; ++k) {
      if (full[k] == 0) continue;
      const std::uint64_t u = k - phi_;
      for (std::uint64_t t = 0; t + 1 < p_; ++t)
        out.coeffs[t * pr1_ + u] -= full[k];
    }
    return out;
  }

  FieldParams params_;
  std::uint64_t pr_ = 0, p_ = 0, pr1_ = 0, phi_ = 0;
  std::vector<std::uint64_t> units_;
};

}  // namespace traceform
