#pragma once

// Segmented sieve of Eratosthenes: prime tables, windowed coprime marking and
// exact prime counting.
//
// Prime indices are 1-based everywhere in this library: p(1) == 2, p(2) == 3,
// p(3) == 5. The interval s_k = [p_k^2, p_{k+1}^2 - 1] and every quantity built
// on it uses the same convention, so an off-by-one here shifts every interval.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sievelab {

using u64 = std::uint64_t;

struct SieveConfig {
  // Entries per sieve segment; windows longer than this are processed in
  // consecutive segments that reuse one buffer.
  std::size_t segment_size = std::size_t{1} << 20;
  // Largest number of entries a single materialized window (or prime table
  // bound) may have.
  u64 memory_budget = u64{1} << 32;
  unsigned threads = 1;
};

// p * p, throwing ResourceError when the square leaves 64-bit range.
u64 checked_square(u64 p);

class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(u64 bound, std::vector<u64> primes);

  u64 bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return primes_.size(); }
  std::span<const u64> primes() const noexcept { return primes_; }

  // p_k, 1-based. Throws DomainError when k == 0 or k > size().
  u64 p(std::size_t k) const;

  // The first k primes {p_1, ..., p_k}.
  std::span<const u64> first(std::size_t k) const;

  // Number of table primes <= x (x must not exceed bound()).
  std::size_t count_upto(u64 x) const;

 private:
  u64 bound_ = 0;
  std::vector<u64> primes_;
};

PrimeTable build_prime_table(u64 bound, const SieveConfig& config = {});

// Smallest convenient table holding at least `count` primes.
PrimeTable build_prime_table_for_count(std::size_t count,
                                       const SieveConfig& config = {});

// Survivor flags of [lo, hi] after removing every multiple of the sieving
// primes (the primes themselves included): flag(n) <=> gcd(n, prod primes) == 1.
class SieveWindow {
 public:
  // Bit i of words is set iff lo + i survived.
  SieveWindow(u64 lo, u64 hi, std::vector<u64> words);

  u64 lo() const noexcept { return lo_; }
  u64 hi() const noexcept { return hi_; }
  u64 length() const noexcept { return hi_ - lo_ + 1; }

  bool survives(u64 n) const;
  u64 count() const;
  std::vector<u64> survivors() const;

 private:
  u64 lo_;
  u64 hi_;
  std::vector<u64> words_;
};

SieveWindow sieve_window(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                         const SieveConfig& config = {});

// Number of n in [lo, hi] coprime to every listed prime, without materializing
// the window. Requires lo >= 1; n == 1 counts as coprime.
u64 count_coprime_in(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                     const SieveConfig& config = {});

// Number of primes in [lo, hi] when every composite in the range has a prime
// factor among sieve_primes (true for s_k and the first k primes). Multiples
// are marked from max(p^2, first multiple >= lo), so listed primes that fall
// inside the window are kept.
u64 count_primes_in(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                    const SieveConfig& config = {});

// Primes in [lo, hi], same contract as count_primes_in.
std::vector<u64> primes_in(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                           const SieveConfig& config = {});

// Exact pi(x); requires x <= table.bound()^2.
u64 count_primes_upto(u64 x, const PrimeTable& table,
                      const SieveConfig& config = {});

// p_k under the 1-based convention.
u64 nth_prime(std::size_t k, const PrimeTable& table);

}  // namespace sievelab
