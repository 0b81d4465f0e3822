#pragma once

#include "traceform/gram.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace traceform {

namespace detail {

constexpr std::size_t max_deep_hole_rank = 8;

struct Cholesky {
  std::size_t m = 0;
  // G = R^T R with R upper triangular
  std::array<std::array<double, max_deep_hole_rank>, max_deep_hole_rank> R{};
  std::array<std::array<double, max_deep_hole_rank>, max_deep_hole_rank> G{};
};

inline Cholesky cholesky_of(const GramMatrix& g) {
  Cholesky ch;
  ch.m = g.dim();
  if (ch.m > max_deep_hole_rank)
    throw std::invalid_argument("deep-hole search supports rank <= 8");
  for (std::size_t i = 0; i < ch.m; ++i)
    for (std::size_t j = 0; j < ch.m; ++j) ch.G[i][j] = g.at(i, j).get_d();
  for (std::size_t i = 0; i < ch.m; ++i) {
    for (std::size_t j = i; j < ch.m; ++j) {
      double s = ch.G[i][j];
      for (std::size_t k = 0; k < i; ++k) s -= ch.R[k][i] * ch.R[k][j];
      if (i == j) {
        if (s <= 0.0)
          throw std::invalid_argument("deep-hole search needs a positive definite form");
        ch.R[i][i] = std::sqrt(s);
      } else {
        ch.R[i][j] = s / ch.R[i][i];
      }
    }
  }
  return ch;
}

// Exact closest-vector query by depth-first enumeration with pruning
// (zig-zag around the Babai point at every level). Returns the squared
// distance from t (coordinates w.r.t. the lattice basis) to Z^m under G,
// and optionally collects every lattice point within `collect_radius2`.
class Enumerator {
 public:
  explicit Enumerator(const Cholesky& ch) : ch_(ch) {}

  double nearest_dist2(const double* t) {
    collect_ = nullptr;
    best_ = babai_dist2(t);
    descend(t, ch_.m - 1, 0.0);
    return best_;
  }

  void collect_within(const double* t, double radius2,
                      std::vector<std::array<double, max_deep_hole_rank>>& out) {
    collect_ = &out;
    best_ = radius2;
    descend(t, ch_.m - 1, 0.0);
    collect_ = nullptr;
  }

 private:
  double babai_dist2(const double* t) {
    double d = 0.0;
    for (std::size_t ii = ch_.m; ii-- > 0;) {
      double c = center(t, ii);
      v_[ii] = std::nearbyint(c);
      double term = ch_.R[ii][ii] * (v_[ii] - c);
      d += term * term;
    }
    return d * (1.0 + 1e-12) + 1e-300;
  }

  double center(const double* t, std::size_t i) const {
    double c = t[i];
    for (std::size_t j = i + 1; j < ch_.m; ++j)
      c -= ch_.R[i][j] * (v_[j] - t[j]) / ch_.R[i][i];
    return c;
  }

  void descend(const double* t, std::size_t i, double partial) {
    const double c = center(t, i);
    const double base = std::nearbyint(c);
    // zig-zag: base, base+1, base-1, base+2, ... ordered by |v - c|
    for (int step = 0;; ++step) {
      double cand;
      if (step == 0) cand = base;
      else if (step % 2 == 1) cand = base + (base <= c ? (step + 1) / 2 : -(step + 1) / 2);
      else cand = base + (base <= c ? -(step / 2) : step / 2);
      const double term = ch_.R[i][i] * (cand - c);
      const double acc = partial + term * term;
      if (acc > best_) {
        // once one side is exhausted the zig-zag alternation still probes the
        // other side; stop only when the nearer remaining candidate fails
        if (step >= 1) break;
        continue;
      }
      v_[i] = cand;
      if (i == 0) {
        if (collect_) {
          collect_->push_back(v_);
        } else if (acc < best_) {
          best_ = acc;
        }
      } else {
        descend(t, i - 1, acc);
      }
    }
  }

  const Cholesky& ch_;
  std::array<double, max_deep_hole_rank> v_{};
  double best_ = 0.0;
  std::vector<std::array<double, max_deep_hole_rank>>* collect_ = nullptr;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Solve the small dense system M x = rhs in place (partial pivoting);
// returns false if M is numerically singular.
inline bool solve_dense(std::vector<double>& M, std::vector<double>& rhs, std::size_t m) {
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < m; ++i)
      if (std::fabs(M[i * m + k]) > std::fabs(M[piv * m + k])) piv = i;
    if (std::fabs(M[piv * m + k]) < 1e-12) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < m; ++j) std::swap(M[k * m + j], M[piv * m + j]);
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      double f = M[i * m + k] / M[k * m + k];
      for (std::size_t j = k; j < m; ++j) M[i * m + j] -= f * M[k * m + j];
      rhs[i] -= f * rhs[k];
    }
  }
  for (std::size_t k = m; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < m; ++j) s -= M[k * m + j] * rhs[j];
    rhs[k] = s / M[k * m + k];
  }
  return true;
}

}  // namespace detail

// Randomized lower bound on max(L, q) = sup_t dist(t, L)^2: hill-climbs the
// exact distance-to-lattice function from `trials` random starts, then
// polishes the best candidate toward an equidistance point of its nearest
// lattice vectors. Every value returned is an exactly-evaluated (up to
// floating point) distance from some point, hence a genuine lower bound.
// Deterministic for fixed (gram, trials, seed) regardless of scheduling:
// trial k draws its own generator seeded from (seed, k) and results combine
// by max.
inline double deep_hole_lower_bound(const GramMatrix& g, std::size_t trials,
                                    std::uint64_t seed) {
  using namespace detail;
  const std::size_t m = g.dim();
  if (m == 0 || trials == 0) return 0.0;
  Cholesky ch = cholesky_of(g);
  Enumerator en(ch);

  std::array<double, max_deep_hole_rank> best_t{};
  double best_d = -1.0;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(trial)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<double, max_deep_hole_rank> t{};
    for (std::size_t i = 0; i < m; ++i) t[i] = uni(rng);
    double d = en.nearest_dist2(t.data());
    double step = 0.35;
    for (int it = 0; it < 60 && step > 1e-7; ++it) {
      std::array<double, max_deep_hole_rank> cand = t;
      for (std::size_t i = 0; i < m; ++i) cand[i] += step * gauss(rng);
      const double cd = en.nearest_dist2(cand.data());
      if (cd > d) {
        d = cd;
        t = cand;
      } else {
        step *= 0.85;
      }
    }
    if (d > best_d) {
      best_d = d;
      best_t = t;
    }
  }

  // Polish: move toward the point equidistant from the current set of
  // nearest lattice vectors (the defining property of a deep hole), as long
  // as the exact re-evaluation confirms an improvement.
  std::vector<std::array<double, max_deep_hole_rank>> pts;
  double slack = 0.5;
  for (int round = 0; round < 60 && slack > 1e-13; ++round, slack *= 0.6) {
    pts.clear();
    en.collect_within(best_t.data(), best_d * (1.0 + slack) + 1e-12, pts);
    if (pts.size() < 2) continue;
    // equidistance conditions 2 (c_k - c_0)^T G x = q(c_k) - q(c_0),
    // solved least-squares via normal equations
    const std::size_t mm = m;
    std::vector<double> A((pts.size() - 1) * mm), b(pts.size() - 1);
    auto qform = [&](const std::array<double, max_deep_hole_rank>& x) {
      double s = 0.0;
      for (std::size_t i = 0; i < mm; ++i)
        for (std::size_t j = 0; j < mm; ++j) s += x[i] * ch.G[i][j] * x[j];
      return s;
    };
    const double q0 = qform(pts[0]);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      for (std::size_t i = 0; i < mm; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < mm; ++j)
          s += 2.0 * (pts[k][j] - pts[0][j]) * ch.G[j][i];
        A[(k - 1) * mm + i] = s;
      }
      b[k - 1] = qform(pts[k]) - q0;
    }
    std::vector<double> M(mm * mm, 0.0), rhs(mm, 0.0);
    for (std::size_t i = 0; i < mm; ++i) {
      for (std::size_t j = 0; j < mm; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) s += A[k * mm + i] * A[k * mm + j];
        M[i * mm + j] = s;
      }
      double s = 0.0;
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) s += A[k * mm + i] * b[k];
      rhs[i] = s;
    }
    // regularize gently toward the current point so rank-deficient systems
    // stay anchored
    double tr = 0.0;
    for (std::size_t i = 0; i < mm; ++i) tr += M[i * mm + i];
    const double lam = std::max(1e-12 * tr / static_cast<double>(mm), 1e-300);
    for (std::size_t i = 0; i < mm; ++i) {
      M[i * mm + i] += lam;
      rhs[i] += lam * best_t[i];
    }
    if (!solve_dense(M, rhs, mm)) continue;
    std::array<double, max_deep_hole_rank> cand{};
    for (std::size_t i = 0; i < mm; ++i) cand[i] = rhs[i];
    const double cd = en.nearest_dist2(cand.data());
    if (cd > best_d) {
      best_d = cd;
      best_t = cand;
    }
  }
  return best_d;
}

}  // namespace traceform
