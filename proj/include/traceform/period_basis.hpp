#pragma once

#include "traceform/gram.hpp"
#include "traceform/residue_orbits.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace traceform {

// The Gaussian-period basis data: the orbit set A whose periods form an
// integral basis of O_K, in canonical order (by (rho-orbit representative,
// own representative) ascending), plus the complementary section B.
struct PeriodBasis {
  std::vector<std::uint32_t> a_orbits;  // |A| = n, canonical order
  std::vector<std::uint32_t> section;   // S/H orbit id -> R/H orbit id; the set B

  friend bool operator==(const PeriodBasis&, const PeriodBasis&) = default;
};

// For each rho-fiber, drop one distinguished orbit (the one with the
// smallest representative, which over the zero fiber is the zero orbit
// itself) and collect the rest as A.
inline PeriodBasis build_basis(const OrbitSpace& space) {
  const auto& orbits = space.orbits();
  PeriodBasis b;
  b.section.assign(space.s_orbits().size(), 0);
  std::vector<bool> have(space.s_orbits().size(), false);
  for (std::uint32_t x = 0; x < orbits.size(); ++x) {
    const std::uint32_t y = space.rho(x);
    if (!have[y]) {  // orbit ids ascend with representatives, so first hit is minimal
      b.section[y] = x;
      have[y] = true;
    } else {
      b.a_orbits.push_back(x);
    }
  }
  auto key = [&](std::uint32_t x) {
    return std::pair<std::uint64_t, std::uint64_t>(
        space.s_orbits()[space.rho(x)].representative, orbits[x].representative);
  };
  std::sort(b.a_orbits.begin(), b.a_orbits.end(),
            [&](std::uint32_t u, std::uint32_t v) { return key(u) < key(v); });
  return b;
}

struct BasisConditionReport {
  // (2): the complement of A maps bijectively onto S/H under rho
  bool complement_section_bijective = true;
  std::optional<std::uint32_t> section_witness;  // S/H orbit hit != once
  // (4): every fiber loses exactly one orbit to the complement
  bool fiber_counts_ok = true;
  std::optional<std::uint32_t> fiber_witness;    // offending S/H orbit

  bool ok() const { return complement_section_bijective && fiber_counts_ok; }
};

// Checks the two defining conditions on a candidate orbit set A (given as
// orbit ids, zero orbit excluded by construction of valid candidates).
inline BasisConditionReport verify_basis_conditions(
    const OrbitSpace& space, const std::vector<std::uint32_t>& a_orbits) {
  BasisConditionReport rep;
  const std::size_t n_orbits = space.orbits().size();
  const std::size_t n_s = space.s_orbits().size();
  std::vector<bool> in_a(n_orbits, false);
  for (std::uint32_t x : a_orbits) in_a.at(x) = true;

  std::vector<std::uint64_t> complement_hits(n_s, 0), a_hits(n_s, 0);
  for (std::uint32_t x = 0; x < n_orbits; ++x)
    (in_a[x] ? a_hits : complement_hits)[space.rho(x)]++;

  for (std::uint32_t y = 0; y < n_s; ++y) {
    if (complement_hits[y] != 1) {
      rep.complement_section_bijective = false;
      rep.section_witness = y;
      break;
    }
  }
  const auto fibers = fiber_sizes(space);
  for (std::uint32_t y = 0; y < n_s; ++y) {
    if (a_hits[y] + 1 != fibers[y]) {
      rep.fiber_counts_ok = false;
      rep.fiber_witness = y;
      break;
    }
  }
  return rep;
}

// Moebius function at p^k: 1, -1, 0 for k = 0, 1, >= 2.
inline int mobius_prime_power(const Int& /*p*/, unsigned k) {
  if (k == 0) return 1;
  return k == 1 ? -1 : 0;
}

// Absolute trace (over Q, from the full cyclotomic field) of the period of
// orbit x: with s = val_p(x), this is e * phi(p^r)/phi(p^{r-s}) * mu(p^{r-s})
// divided by e, i.e. phi(p^r)/phi(p^{r-s}) * mu(p^{r-s}).
inline Int trace_of_period(const OrbitSpace& space, const Orbit& x) {
  const FieldParams& fp = space.params();
  const unsigned s = x.s;
  const unsigned k = fp.r - std::min(s, fp.r);  // remaining conductor exponent
  Int ratio = fp.phi / phi_prime_power(fp.p, k);
  return ratio * mobius_prime_power(fp.p, k);
}

// q(f_x, f_y) by the closed form, for nonzero orbits x1, x2 given by id.
// Five cases, split on orbit equality and on the rho projections.
inline Rat gram_entry_closed_form(const OrbitSpace& space, std::uint32_t x1,
                                  std::uint32_t x2) {
  if (x1 == OrbitSpace::zero_orbit || x2 == OrbitSpace::zero_orbit)
    throw std::invalid_argument("Gram closed form is for nonzero orbits");
  const FieldParams& fp = space.params();
  const Int pr1 = fp.conductor / fp.p;  // p^{r-1}
  const bool rho_zero_1 =
      space.s_orbits()[space.rho(x1)].representative == 0;
  const bool rho_equal = space.rho(x1) == space.rho(x2);
  Int value;
  if (x1 == x2) {
    if (rho_zero_1)
      value = fp.conductor - fp.e * pr1;  // p^r - e p^{r-1}
    else
      value = fp.conductor - pr1;         // p^r - p^{r-1}
  } else if (!rho_equal) {
    value = 0;
  } else if (rho_zero_1) {
    value = -(fp.e * pr1);
  } else {
    value = -pr1;
  }
  return Rat(value);
}

inline GramMatrix gram_closed_form(const OrbitSpace& space, const PeriodBasis& basis) {
  const std::size_t n = basis.a_orbits.size();
  GramMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g.at(i, j) = gram_entry_closed_form(space, basis.a_orbits[i], basis.a_orbits[j]);
  return g;
}

}  // namespace traceform
