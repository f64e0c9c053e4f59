#pragma once

// The sieve intervals s_k = [p_k^2, p_{k+1}^2 - 1]. Each s_k is fully resolved
// by the first k primes: every element is either a multiple of one of them or
// a prime.

#include <cstddef>
#include <utility>
#include <vector>

#include "sievelab/sieve.hpp"

namespace sievelab {

struct IntervalRecord {
  std::size_t k = 0;
  u64 p_k = 0;
  u64 p_next = 0;       // p_{k+1}
  u64 gap = 0;          // g_k = p_{k+1} - p_k
  u64 length = 0;       // l_k = p_{k+1}^2 - p_k^2
  u64 pi_k = 0;         // primes in s_k
  double li_k = 0;      // integral of 1/log t over s_k
  double pnt_estimate = 0;  // l_k / log p_{k+1}^2

  u64 lo() const noexcept { return p_k * p_k; }
  u64 hi() const noexcept { return p_next * p_next - 1; }
};

// Record k with every field derived from (k, pi_k); no sieving.
IntervalRecord make_interval_record(std::size_t k, u64 pi_k, const PrimeTable& table);

// Primes in s_k, counted by sieving the window with exactly the first k primes.
u64 count_interval_primes(std::size_t k, const PrimeTable& table,
                          const SieveConfig& config = {});

class IntervalSet {
 public:
  IntervalSet() = default;
  // Records must be contiguous in k starting at 1.
  explicit IntervalSet(std::vector<IntervalRecord> records);

  std::size_t k_max() const noexcept { return records_.size(); }
  const std::vector<IntervalRecord>& records() const noexcept { return records_; }
  // 1-based.
  const IntervalRecord& at(std::size_t k) const;

  // pi(p_{k+1}^2) = 2 + sum_{j<=k} pi_j.
  u64 pi_upto_end(std::size_t k) const;

 private:
  std::vector<IntervalRecord> records_;
  std::vector<u64> pi_prefix_;  // pi_prefix_[k] = sum_{j<=k} pi_j
};

// Records k_begin..k_end (inclusive), computed independently per k.
std::vector<IntervalRecord> build_interval_records(std::size_t k_begin, std::size_t k_end,
                                                   const PrimeTable& table,
                                                   const SieveConfig& config = {});

IntervalSet build_intervals(std::size_t k_max, const PrimeTable& table,
                            const SieveConfig& config = {});

// The k with p_k^2 <= x < p_{k+1}^2.
std::size_t locate_interval(u64 x, const IntervalSet& set);

struct PartialCounts {
  std::size_t k = 0;
  u64 pi_partial = 0;       // pi(x) - pi(p_k^2)
  double li_partial = 0;    // li(x) - li(p_k^2)
};

PartialCounts partial_counts(u64 x, const IntervalSet& set, const PrimeTable& table,
                             const SieveConfig& config = {});

struct GapSeries {
  std::size_t k = 0;
  std::vector<std::pair<u64, u64>> gaps;  // (p_i, p_{i+1} - p_i), both in s_k
  double mean_gap = 0;
  double expected_gap = 0;  // log p_{k+1}^2
};

GapSeries gap_series(std::size_t k, const IntervalSet& set, const PrimeTable& table,
                     const SieveConfig& config = {});

}  // namespace sievelab
