#pragma once

#include <cstdint>
#include <vector>

namespace traceform {

// Segmented sieve of Eratosthenes; all primes <= limit, ascending.
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;

  std::uint64_t root = 1;
  while ((root + 1) * (root + 1) <= limit) ++root;

  std::vector<bool> small(root + 1, true);
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i)
    if (small[i]) base.push_back(i);

  constexpr std::uint64_t segment = 1 << 16;
  std::vector<bool> mark;
  for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    mark.assign(hi - lo + 1, true);
    for (std::uint64_t q : base) {
      std::uint64_t start = std::max(q * q, ((lo + q - 1) / q) * q);
      for (std::uint64_t j = start; j <= hi; j += q) mark[j - lo] = false;
    }
    // every composite x has a prime factor q <= sqrt(x) <= root and x >= q^2,
    // so the marking above strikes exactly the composites
    for (std::uint64_t x = lo; x <= hi; ++x)
      if (mark[x - lo]) primes.push_back(x);
  }
  return primes;
}

}  // namespace traceform
