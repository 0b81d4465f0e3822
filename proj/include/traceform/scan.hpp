#pragma once

#include "traceform/certify.hpp"
#include "traceform/numeric.hpp"
#include "traceform/sieve.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace traceform {

// Verdicts for one (e, p) pair of the prime-conductor survey, in decision
// order: small degree settles the question outright, the p > 2e^2 threshold
// marks the regime where the h-criterion provably stops helping, and
// otherwise h <= 1 certifies the Minkowski-style inequality.
enum class ScanOutcome { degree_le_8, minkowski_by_h, threshold_p_gt_2e2, unresolved };

inline const char* to_string(ScanOutcome o) {
  switch (o) {
    case ScanOutcome::degree_le_8: return "degree_le_8";
    case ScanOutcome::minkowski_by_h: return "minkowski_by_h";
    case ScanOutcome::threshold_p_gt_2e2: return "threshold_p_gt_2e2";
    default: return "unresolved";
  }
}

enum class CertMethod { none, bit_length, log_interval, exact_rational };

inline const char* to_string(CertMethod m) {
  switch (m) {
    case CertMethod::bit_length: return "bit_length";
    case CertMethod::log_interval: return "log_interval";
    case CertMethod::exact_rational: return "exact_rational";
    default: return "none";
  }
}

// Decision and evidence for h(e, p) <= 1, where
//   h = h1 * p^{e/(p-1)},  h1 = (p^2 + p + 1 - e^2)/(3 p^2).
// Since h <= 1 iff a^{p-1} p^e <= b^{p-1} with a = p^2+p+1-e^2, b = 3p^2,
// the decision is exact whichever stage settles it. `cert_num/cert_den` hold
// the exact (uncancelled) integers a^{p-1} p^e and b^{p-1} when stage 3 ran.
struct HCert {
  bool leq_one = false;
  CertMethod method = CertMethod::none;
  double h_value = 0.0;           // double-precision display of h
  double gap_log10 = 0.0;         // log10(cert) = (p-1)(log a - log b) + e log p
  std::optional<Int> cert_num, cert_den;

  friend bool operator==(const HCert&, const HCert&) = default;
};

inline HCert h_leq_one(std::uint64_t e, std::uint64_t p, bool exact_always = false) {
  if (e < 2 || e % 2 != 0) throw std::invalid_argument("h needs an even e >= 2");
  if (!is_prime(Int(p)) || p % 2 == 0) throw std::invalid_argument("h needs an odd prime p");
  if ((p - 1) % e != 0) throw std::invalid_argument("h needs p = 1 (mod e)");
  if (p < 2 * e + 1) throw std::invalid_argument("h needs p >= 2e + 1");

  HCert out;
  const Int a = Int(p) * p + p + 1 - Int(e) * e;  // > 0 on the domain
  const Int b = 3 * Int(p) * p;
  const unsigned long pm1 = static_cast<unsigned long>(p - 1);
  const unsigned long eu = static_cast<unsigned long>(e);

  const double h1 = a.get_d() / b.get_d();
  out.h_value = h1 * std::exp(static_cast<double>(e) * std::log(static_cast<double>(p)) /
                              static_cast<double>(p - 1));
  out.gap_log10 = (static_cast<double>(p - 1) * (std::log(a.get_d()) - std::log(b.get_d())) +
                   static_cast<double>(e) * std::log(static_cast<double>(p))) /
                  std::log(10.0);

  if (!exact_always) {
    // stage 1: bit lengths; 2^{bits-1} <= x < 2^{bits}
    const unsigned long bits_a = mpz_sizeinbase(a.get_mpz_t(), 2);
    const unsigned long bits_b = mpz_sizeinbase(b.get_mpz_t(), 2);
    const unsigned long bits_p = mpz_sizeinbase(Int(p).get_mpz_t(), 2);
    // lhs < 2^{(p-1) bits_a + e bits_p}, rhs >= 2^{(p-1)(bits_b - 1)}
    if (pm1 * bits_a + eu * bits_p <= pm1 * (bits_b - 1)) {
      out.leq_one = true;
      out.method = CertMethod::bit_length;
      return out;
    }
    // lhs >= 2^{(p-1)(bits_a-1) + e(bits_p-1)}, rhs < 2^{(p-1) bits_b}
    if (pm1 * (bits_a - 1) + eu * (bits_p - 1) >= pm1 * bits_b) {
      out.leq_one = false;
      out.method = CertMethod::bit_length;
      return out;
    }

    // stage 2: exact-rational bracket of (p-1)(ln a - ln b) + e ln p
    RatInterval iv =
        (log_interval(a) - log_interval(b)).scaled(Rat(pm1)) +
        log_interval(Int(p)).scaled(Rat(eu));
    if (iv.certainly_negative()) {
      out.leq_one = true;
      out.method = CertMethod::log_interval;
      return out;
    }
    if (iv.certainly_positive()) {
      out.leq_one = false;
      out.method = CertMethod::log_interval;
      return out;
    }
  }

  // stage 3: the exact integers themselves
  Int lhs = pow_int(a, pm1) * pow_int(Int(p), eu);
  Int rhs = pow_int(b, pm1);
  out.leq_one = lhs <= rhs;
  out.method = CertMethod::exact_rational;
  out.cert_num = std::move(lhs);
  out.cert_den = std::move(rhs);
  return out;
}

struct ScanVerdict {
  std::uint64_t e = 0, p = 0, n = 0;
  ScanOutcome outcome = ScanOutcome::unresolved;
  std::optional<HCert> h;

  friend bool operator==(const ScanVerdict&, const ScanVerdict&) = default;
};

// All verdicts for one even e: primes p = 1 (mod e) with 2e+1 <= p <= p_max
// (p_max = 0 means the natural horizon 2e^2; a larger p_max labels the tail
// beyond 2e^2 with the threshold verdict instead of computing h there).
// `primes` may share a sieve across calls; it must cover p_max.
inline std::vector<ScanVerdict> scan_Se(std::uint64_t e, std::uint64_t p_max = 0,
                                        bool exact_always = false,
                                        const std::vector<std::uint64_t>* primes = nullptr) {
  if (e < 2 || e % 2 != 0) throw std::invalid_argument("scan needs an even e >= 2");
  const std::uint64_t horizon = 2 * e * e;
  if (p_max == 0) p_max = horizon;
  std::vector<std::uint64_t> own;
  if (primes == nullptr) {
    own = sieve_primes(p_max);
    primes = &own;
  }
  std::vector<ScanVerdict> rows;
  for (std::uint64_t p : *primes) {
    if (p > p_max) break;
    if (p < 2 * e + 1 || (p - 1) % e != 0) continue;
    ScanVerdict row;
    row.e = e;
    row.p = p;
    row.n = (p - 1) / e;
    if (row.n <= 8) {
      row.outcome = ScanOutcome::degree_le_8;
    } else if (p > horizon) {
      row.outcome = ScanOutcome::threshold_p_gt_2e2;
    } else {
      row.h = h_leq_one(e, p, exact_always);
      row.outcome = row.h->leq_one ? ScanOutcome::minkowski_by_h : ScanOutcome::unresolved;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ScanSummary {
  std::vector<ScanVerdict> rows;  // ordered by (e, p)
  std::size_t unresolved = 0;
};

// Survey of every even e <= e_max over its full horizon. Work is split
// across `jobs` threads by e value; rows are merged back in (e, p) order, so
// the result is independent of scheduling.
inline ScanSummary scan_range(std::uint64_t e_max, std::size_t jobs = 1,
                              bool exact_always = false) {
  if (e_max < 2) throw std::invalid_argument("scan needs e_max >= 2");
  ScanSummary out;
  std::vector<std::uint64_t> es;
  for (std::uint64_t e = 2; e <= e_max; e += 2) es.push_back(e);
  const std::vector<std::uint64_t> primes = sieve_primes(2 * e_max * e_max);

  std::vector<std::vector<ScanVerdict>> per_e(es.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < es.size(); ++i)
      per_e[i] = scan_Se(es[i], 0, exact_always, &primes);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < es.size(); i = next.fetch_add(1))
        per_e[i] = scan_Se(es[i], 0, exact_always, &primes);
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, es.size()); ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (auto& rows : per_e) {
    for (ScanVerdict& row : rows) {
      if (row.outcome == ScanOutcome::unresolved) ++out.unresolved;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

struct MonotoneRow {
  std::uint64_t p = 0;
  double h = 0.0;
  bool exact_certified = false;  // interval-certified h(p_k) > h(p_{k+1})
};

// Witnesses that h decreases along increasing admissible primes p >= 2e^2.
// Float comparison with a 1e-12 margin is mandatory; with `exact_pairs` each
// consecutive drop is additionally certified through exact-rational log
// brackets. Throws if any sample pair fails to decrease.
inline std::vector<MonotoneRow> monotonicity_witness(
    std::uint64_t e, const std::vector<std::uint64_t>& ps, bool exact_pairs = false) {
  if (e < 2 || e % 2 != 0) throw std::invalid_argument("monotonicity needs an even e >= 2");
  std::vector<MonotoneRow> rows;
  RatInterval prev_log{};
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const std::uint64_t p = ps[k];
    if (k > 0 && p <= ps[k - 1]) throw std::invalid_argument("samples must increase");
    if (p < 2 * e * e) throw std::invalid_argument("samples must satisfy p >= 2e^2");
    if (!is_prime(Int(p)) || (p - 1) % e != 0)
      throw std::invalid_argument("samples must be primes = 1 (mod e)");
    const Int a = Int(p) * p + p + 1 - Int(e) * e;
    const Int b = 3 * Int(p) * p;
    MonotoneRow row;
    row.p = p;
    row.h = (a.get_d() / b.get_d()) *
            std::exp(static_cast<double>(e) * std::log(static_cast<double>(p)) /
                     static_cast<double>(p - 1));
    if (k > 0 && !(row.h < rows.back().h - 1e-12))
      throw std::logic_error("h failed to decrease along the sample");
    if (exact_pairs) {
      // ln h = ln a - ln b + (e/(p-1)) ln p, bracketed exactly
      RatInterval lg = log_interval(a) - log_interval(b) +
                       log_interval(Int(p)).scaled(make_rat(Int(e), Int(p) - 1));
      if (k > 0) {
        row.exact_certified = (prev_log - lg).certainly_positive();
        if (!row.exact_certified)
          throw std::logic_error("exact bracket failed to certify the decrease");
      }
      prev_log = lg;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace traceform
