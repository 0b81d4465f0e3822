#pragma once

#include "traceform/gram.hpp"
#include "traceform/period_basis.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace traceform {

enum class BlockKind { zero_fiber, nonzero_fiber };

inline const char* to_string(BlockKind k) {
  return k == BlockKind::zero_fiber ? "zero_fiber" : "nonzero_fiber";
}

// One isometry class of orthogonal summand of (O_K, q):
//   zero_fiber:    e p^{r-1} L_{p/e, d}, multiplicity 1, rank d
//   nonzero_fiber: p^{r-1} L_{p, p-1}, multiplicity (p^{r-1}-1)/e, rank p-1
struct BlockSpec {
  BlockKind kind = BlockKind::zero_fiber;
  Int multiplicity;
  std::size_t rank = 0;
  GramMatrix gram;
};

inline std::vector<BlockSpec> expected_blocks(const FieldParams& fp) {
  std::vector<BlockSpec> blocks;
  const Int pr1 = fp.conductor / fp.p;

  BlockSpec zero;
  zero.kind = BlockKind::zero_fiber;
  zero.multiplicity = 1;
  zero.rank = static_cast<std::size_t>(to_u64(fp.d, "d"));
  zero.gram = gram_Lbm(make_rat(fp.p, fp.e), zero.rank).scaled(Rat(fp.e * pr1));
  blocks.push_back(std::move(zero));

  Int mult = delta_n_value(fp);  // (p^{r-1} - 1)/e nonzero fibers
  if (mult > 0) {
    BlockSpec nz;
    nz.kind = BlockKind::nonzero_fiber;
    nz.multiplicity = mult;
    nz.rank = static_cast<std::size_t>(to_u64(fp.p - 1, "p-1"));
    nz.gram = gram_Lbm(Rat(fp.p), nz.rank).scaled(Rat(pr1));
    blocks.push_back(std::move(nz));
  }
  return blocks;
}

// The full predicted Gram matrix, blocks laid out in canonical basis order:
// the zero-fiber block first, then the nonzero-fiber copies.
inline GramMatrix predicted_gram(const FieldParams& fp) {
  auto blocks = expected_blocks(fp);
  GramMatrix g(0);
  for (const BlockSpec& b : blocks) {
    Int m = b.multiplicity;
    while (m > 0) {
      g = g.direct_sum(b.gram);
      m -= 1;
    }
  }
  return g;
}

struct DecompositionVerdict {
  bool ok = true;
  std::string what;  // empty when ok; otherwise which invariant broke
  std::size_t row = 0, col = 0;
  Rat expected, actual;
};

// Checks that an oracle Gram matrix on the canonically ordered period basis
// splits into the expected orthogonal blocks, entry by entry. Fibers are
// read off the basis itself (grouped by rho), not assumed contiguous.
inline DecompositionVerdict verify_decomposition(const GramMatrix& oracle,
                                                 const OrbitSpace& space,
                                                 const PeriodBasis& basis,
                                                 const std::vector<BlockSpec>& blocks) {
  DecompositionVerdict v;
  const std::size_t n = basis.a_orbits.size();
  if (oracle.dim() != n) {
    v.ok = false;
    v.what = "oracle dimension disagrees with the basis";
    return v;
  }

  // fiber id and position-within-fiber for each basis index
  std::map<std::uint32_t, std::vector<std::size_t>> fibers;
  for (std::size_t i = 0; i < n; ++i)
    fibers[space.rho(basis.a_orbits[i])].push_back(i);

  const BlockSpec* zero_block = nullptr;
  const BlockSpec* nonzero_block = nullptr;
  for (const BlockSpec& b : blocks)
    (b.kind == BlockKind::zero_fiber ? zero_block : nonzero_block) = &b;

  Int nonzero_fibers = 0;
  for (const auto& [y, members] : fibers) {
    const bool is_zero_fiber = space.s_orbits()[y].representative == 0;
    const BlockSpec* b = is_zero_fiber ? zero_block : nonzero_block;
    if (!is_zero_fiber) nonzero_fibers += 1;
    if (b == nullptr || members.size() != b->rank) {
      v.ok = false;
      v.what = "fiber rank disagrees with the expected block";
      v.row = v.col = members.front();
      return v;
    }
  }
  if (zero_block == nullptr || fibers.empty() ||
      nonzero_fibers != (nonzero_block ? nonzero_block->multiplicity : Int(0))) {
    v.ok = false;
    v.what = "fiber multiplicities disagree with the expected blocks";
    return v;
  }

  std::vector<const BlockSpec*> block_of(n, nullptr);
  std::vector<std::size_t> pos(n, 0);
  std::vector<std::uint32_t> fiber_of(n, 0);
  for (const auto& [y, members] : fibers) {
    const bool is_zero_fiber = space.s_orbits()[y].representative == 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      block_of[members[k]] = is_zero_fiber ? zero_block : nonzero_block;
      pos[members[k]] = k;
      fiber_of[members[k]] = y;
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rat expected = (fiber_of[i] == fiber_of[j])
                               ? block_of[i]->gram.at(pos[i], pos[j])
                               : Rat(0);
      if (oracle.at(i, j) != expected) {
        v.ok = false;
        v.what = "Gram entry disagrees with the block decomposition";
        v.row = i;
        v.col = j;
        v.expected = expected;
        v.actual = oracle.at(i, j);
        return v;
      }
    }
  return v;
}

// max(L_{p, p-1}) = (p^2 - 1)/12, exactly.
inline Rat max_Lp_exact(const Int& p) {
  return make_rat(p * p - 1, Int(12));
}

// max(L_{p/e, d}) <= d (p^2 + p + 1 - e^2) / (12 e p); equality iff e = 1.
inline Rat max_Lped_bound(const FieldParams& fp) {
  return make_rat(fp.d * (fp.p * fp.p + fp.p + 1 - fp.e * fp.e), 12 * fp.e * fp.p);
}

// max(O_K, q) <= n (p^{r+1} + p^r + 1 - e^2) / (12 p), by summing the
// per-block bounds.
inline Rat max_bound(const FieldParams& fp) {
  Int pr = fp.conductor;
  return make_rat(fp.n * (pr * fp.p + pr + 1 - fp.e * fp.e), 12 * fp.p);
}

// Thickness-style invariant tau(alpha) = max(alpha q) / det(alpha q)^{1/n},
// evaluated as an upper bound at alpha = 1 and split into a rational
// coefficient and a power of p: tau(1) <= coeff * p^{exponent}. This is a
// bound at one point of the alpha ray, not a claim about inf_alpha tau.
struct TauUpper {
  Rat coeff;      // n (p^{r+1} + p^r + 1 - e^2) / (12 p^{r+1})
  Rat exponent;   // r - upsilon/n
  double approx = 0.0;
};

inline TauUpper tau_upper(const FieldParams& fp) {
  TauUpper t;
  Int pr = fp.conductor;
  t.coeff = make_rat(fp.n * (pr * fp.p + pr + 1 - fp.e * fp.e), 12 * pr * fp.p);
  t.exponent = make_rat(Int(fp.r) * fp.n - upsilon(fp), fp.n);
  t.approx = pow_to_double(t.coeff, 1.0) *
             pow_to_double(Rat(fp.p), t.exponent.get_d());
  return t;
}

}  // namespace traceform
