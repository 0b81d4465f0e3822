#pragma once

#include "traceform/field_params.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace traceform {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) acc = mulmod(acc, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace detail

// One H-orbit of Z/p^k under multiplication. `s` is the common p-adic
// valuation of its elements (k for the zero orbit).
struct Orbit {
  std::uint64_t representative = 0;      // smallest element
  std::vector<std::uint64_t> elements;   // ascending
  unsigned s = 0;

  friend bool operator==(const Orbit&, const Orbit&) = default;
};

// Smallest primitive root mod p, lifted so it stays primitive mod every
// power of the odd prime p.
inline std::uint64_t primitive_root_mod_prime_power(std::uint64_t p, unsigned r) {
  std::vector<Int> qs = distinct_prime_factors(Int(p) - 1);
  std::uint64_t g = 0;
  for (std::uint64_t c = 2; c < p; ++c) {
    bool ok = true;
    for (const Int& q : qs) {
      std::uint64_t sub = to_u64((Int(p) - 1) / q, "subgroup exponent");
      if (detail::powmod(c, sub, p) == 1) { ok = false; break; }
    }
    if (ok) { g = c; break; }
  }
  if (g == 0) throw std::logic_error("no primitive root found (p not prime?)");
  if (r >= 2) {
    // g stays primitive mod p^r for odd p unless g^{p-1} = 1 (mod p^2),
    // in which case g + p works
    std::uint64_t p2 = p * p;
    if (detail::powmod(g, p - 1, p2) == 1) g += p;
  }
  return g;
}

// The unique subgroup H of order e in (Z/p^r)^*, sorted ascending:
// the set of (phi/e)-th powers.
inline std::vector<std::uint64_t> subgroup_H(const FieldParams& fp) {
  if (fp.conductor >= (Int(1) << 62))
    throw std::overflow_error("conductor too large for the orbit machinery (needs p^r < 2^62)");
  std::uint64_t m = to_u64(fp.conductor, "conductor");
  std::uint64_t p = to_u64(fp.p, "p");
  std::uint64_t e = to_u64(fp.e, "e");
  std::uint64_t g = primitive_root_mod_prime_power(p, fp.r) % m;
  std::uint64_t t = detail::powmod(g, to_u64(fp.n, "phi/e"), m);
  std::vector<std::uint64_t> H;
  H.reserve(e);
  std::uint64_t cur = 1;
  for (std::uint64_t k = 0; k < e; ++k) {
    H.push_back(cur);
    cur = detail::mulmod(cur, t, m);
  }
  if (cur != 1) throw std::logic_error("generator order mismatch while building H");
  std::sort(H.begin(), H.end());
  if (std::adjacent_find(H.begin(), H.end()) != H.end())
    throw std::logic_error("H has repeated elements");
  return H;
}

// The orbit spaces (Z/p^r)/H and (Z/p^{r-1})/H together with the reduction
// map rho between them. Orbits are indexed by ascending representative, so
// the zero orbit is always index 0.
class OrbitSpace {
 public:
  explicit OrbitSpace(FieldParams fp) : params_(std::move(fp)) {
    modulus_ = to_u64(params_.conductor, "conductor");
    H_ = subgroup_H(params_);
    const std::uint64_t p = to_u64(params_.p, "p");
    build_orbits(modulus_, p, H_, params_.r, orbits_, index_);

    s_modulus_ = modulus_ / p;
    if (params_.r == 1) {
      // S = Z/1 is the zero ring: a single orbit {0} of valuation 0
      s_orbits_ = {Orbit{0, {0}, 0}};
      s_index_ = {0};
    } else {
      std::vector<std::uint64_t> Hs;
      Hs.reserve(H_.size());
      for (std::uint64_t h : H_) Hs.push_back(h % s_modulus_);
      std::sort(Hs.begin(), Hs.end());
      Hs.erase(std::unique(Hs.begin(), Hs.end()), Hs.end());
      if (Hs.size() != H_.size())
        throw std::logic_error("H does not inject into (Z/p^{r-1})^*");
      build_orbits(s_modulus_, p, Hs, params_.r - 1, s_orbits_, s_index_);
    }

    rho_.resize(orbits_.size());
    for (std::size_t i = 0; i < orbits_.size(); ++i)
      rho_[i] = s_index_[orbits_[i].representative % s_modulus_];

    // |(Z/p^r)/H| = 1 + (p^r - 1)/e since H acts freely off zero
    const std::uint64_t e = to_u64(params_.e, "e");
    if (orbits_.size() != 1 + (modulus_ - 1) / e)
      throw std::logic_error("orbit count disagrees with 1 + (p^r - 1)/e");
  }

  const FieldParams& params() const { return params_; }
  std::uint64_t modulus() const { return modulus_; }
  const std::vector<std::uint64_t>& H() const { return H_; }

  const std::vector<Orbit>& orbits() const { return orbits_; }
  std::uint32_t orbit_of(std::uint64_t residue) const { return index_.at(residue); }
  static constexpr std::uint32_t zero_orbit = 0;

  std::uint64_t s_modulus() const { return s_modulus_; }
  const std::vector<Orbit>& s_orbits() const { return s_orbits_; }
  std::uint32_t s_orbit_of(std::uint64_t s_residue) const { return s_index_.at(s_residue); }

  // index of the S/H orbit under x (reduction mod p^{r-1})
  std::uint32_t rho(std::uint32_t orbit_id) const { return rho_.at(orbit_id); }

 private:
  static void build_orbits(std::uint64_t m, std::uint64_t p,
                           const std::vector<std::uint64_t>& H, unsigned val_cap,
                           std::vector<Orbit>& orbits,
                           std::vector<std::uint32_t>& index) {
    constexpr std::uint32_t unseen = std::numeric_limits<std::uint32_t>::max();
    index.assign(m, unseen);
    orbits.clear();
    for (std::uint64_t x = 0; x < m; ++x) {
      if (index[x] != unseen) continue;
      Orbit orb;
      orb.representative = x;  // x is minimal: smaller elements are already seen
      for (std::uint64_t h : H) orb.elements.push_back(detail::mulmod(h, x, m));
      std::sort(orb.elements.begin(), orb.elements.end());
      orb.elements.erase(std::unique(orb.elements.begin(), orb.elements.end()),
                         orb.elements.end());
      if (x != 0 && orb.elements.size() != H.size())
        throw std::logic_error("H fails to act freely on a nonzero residue");
      orb.s = valuation(x, p, val_cap);
      const auto id = static_cast<std::uint32_t>(orbits.size());
      for (std::uint64_t y : orb.elements) index[y] = id;
      orbits.push_back(std::move(orb));
    }
  }

  // p-adic valuation, with val(0) = cap (the exponent of the modulus)
  static unsigned valuation(std::uint64_t x, std::uint64_t p, unsigned cap) {
    if (x == 0) return cap;
    unsigned v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
  }

  FieldParams params_;
  std::uint64_t modulus_ = 0;
  std::vector<std::uint64_t> H_;
  std::vector<Orbit> orbits_;
  std::vector<std::uint32_t> index_;
  std::uint64_t s_modulus_ = 0;
  std::vector<Orbit> s_orbits_;
  std::vector<std::uint32_t> s_index_;
  std::vector<std::uint32_t> rho_;
};

inline const Orbit& project_rho(const OrbitSpace& space, const Orbit& x) {
  return space.s_orbits()[space.rho(space.orbit_of(x.representative))];
}

// Fiber cardinalities of rho : (Z/p^r)/H -> (Z/p^{r-1})/H, indexed by
// S/H orbit id. Verified against the closed form: 1 + (p-1)/e over the
// zero orbit, p over every other orbit.
inline std::vector<std::uint64_t> fiber_sizes(const OrbitSpace& space) {
  std::vector<std::uint64_t> counts(space.s_orbits().size(), 0);
  for (std::size_t i = 0; i < space.orbits().size(); ++i) ++counts[space.rho(static_cast<std::uint32_t>(i))];
  const Int& p = space.params().p;
  const Int& d = space.params().d;
  for (std::size_t y = 0; y < counts.size(); ++y) {
    const bool y_is_zero = space.s_orbits()[y].representative == 0;
    Int expected = y_is_zero ? Int(1 + d) : p;
    if (Int(static_cast<unsigned long>(counts[y])) != expected)
      throw std::logic_error("fiber size deviates from the closed form");
  }
  return counts;
}

}  // namespace traceform
