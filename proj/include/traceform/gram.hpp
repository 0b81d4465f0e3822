#pragma once

#include "traceform/numeric.hpp"

#include <cstddef>
#include <vector>

namespace traceform {

// Dense symmetric matrix of exact rationals; the Gram matrix of a quadratic
// form on a chosen basis. Small dimensions only (degrees of number fields),
// so dense row-major storage is right.
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  static GramMatrix identity(std::size_t dim) {
    GramMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i) g.at(i, i) = 1;
    return g;
  }

  std::size_t dim() const { return dim_; }
  Rat& at(std::size_t i, std::size_t j) { return a_.at(i * dim_ + j); }
  const Rat& at(std::size_t i, std::size_t j) const { return a_.at(i * dim_ + j); }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

  // q(x) = x^T G x for an integer coordinate vector
  Rat evaluate(const std::vector<Int>& x) const {
    if (x.size() != dim_) throw std::invalid_argument("coordinate size mismatch");
    Rat acc = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (x[j] == 0) continue;
        acc += at(i, j) * x[i] * x[j];
      }
    }
    return acc;
  }

  // direct sum: this ⊥ other, blocks in call order
  GramMatrix direct_sum(const GramMatrix& other) const {
    GramMatrix g(dim_ + other.dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) g.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < other.dim_; ++i)
      for (std::size_t j = 0; j < other.dim_; ++j)
        g.at(dim_ + i, dim_ + j) = other.at(i, j);
    return g;
  }

  GramMatrix scaled(const Rat& c) const {
    GramMatrix g(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) g.a_[k] = a_[k] * c;
    return g;
  }

  friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Rat> a_;
};

namespace detail {

// Clear denominators: returns (M, s) with M integral and M = s * G entrywise.
inline std::pair<std::vector<Int>, Int> clear_denominators(const GramMatrix& g) {
  const std::size_t n = g.dim();
  Int s = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Int& den = g.at(i, j).get_den();
      Int gcd;
      mpz_gcd(gcd.get_mpz_t(), s.get_mpz_t(), den.get_mpz_t());
      s *= den / gcd;
    }
  std::vector<Int> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rat& q = g.at(i, j);
      m[i * n + j] = q.get_num() * (s / q.get_den());
    }
  return {std::move(m), std::move(s)};
}

// Bareiss fraction-free elimination on an integer matrix. With
// `allow_swaps` the return value is det(M); without swaps it requires all
// leading principal minors nonzero and leaves minors[k] = det of the
// leading (k+1)x(k+1) block (used for the definiteness test).
inline Int bareiss_det(std::vector<Int> m, std::size_t n, bool allow_swaps,
                       std::vector<Int>* minors = nullptr) {
  if (n == 0) return Int(1);
  auto at = [&](std::size_t i, std::size_t j) -> Int& { return m[i * n + j]; };
  Int prev = 1;
  int sign = 1;
  if (minors) minors->clear();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      if (!allow_swaps) throw std::domain_error("zero leading principal minor");
      std::size_t piv = k + 1;
      while (piv < n && at(piv, k) == 0) ++piv;
      if (piv == n) return Int(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    if (minors) minors->push_back(sign * at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        // Bareiss: division by the previous pivot is exact
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  if (minors) minors->push_back(sign * at(n - 1, n - 1));
  return sign * at(n - 1, n - 1);
}

}  // namespace detail

inline Rat det_exact(const GramMatrix& g) {
  auto [m, s] = detail::clear_denominators(g);
  Int det_scaled = detail::bareiss_det(std::move(m), g.dim(), /*allow_swaps=*/true);
  // det(sG) = s^n det(G)
  return make_rat(std::move(det_scaled), pow_int(s, static_cast<unsigned long>(g.dim())));
}

// Sylvester criterion on exact leading principal minors. A zero minor along
// the way already refutes positive definiteness, so the no-swap elimination
// aborting there is the correct answer.
inline bool is_positive_definite(const GramMatrix& g) {
  if (!g.is_symmetric()) return false;
  if (g.dim() == 0) return true;
  auto [m, s] = detail::clear_denominators(g);
  std::vector<Int> minors;
  try {
    detail::bareiss_det(std::move(m), g.dim(), /*allow_swaps=*/false, &minors);
  } catch (const std::domain_error&) {
    return false;
  }
  for (const Int& mk : minors)
    if (mk <= 0) return false;
  return true;
}

// Gram matrix b*I_m - J_m of the lattice family L_{b,m} (b rational, b > m
// for positive definiteness; the b = m boundary is degenerate).
inline GramMatrix gram_Lbm(const Rat& b, std::size_t m) {
  if (m == 0) throw std::invalid_argument("L_{b,m} needs m >= 1");
  if (b <= Rat(static_cast<unsigned long>(m)))
    throw std::invalid_argument("L_{b,m} needs b > m for positive definiteness");
  GramMatrix g(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g.at(i, j) = (i == j) ? b - 1 : Rat(-1);
  return g;
}

// det L_{b,m} = (b - m) b^{m-1}
inline Rat det_Lbm_closed_form(const Rat& b, std::size_t m) {
  return (b - static_cast<unsigned long>(m)) *
         pow_rat(b, static_cast<unsigned long>(m == 0 ? 0 : m - 1));
}

}  // namespace traceform
