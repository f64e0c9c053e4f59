#pragma once

// Random models for the prime count of s_k: the sample space of coprime counts
// over all p_k# shifts of s_k, its rescaling by e^gamma / 2, the binomial and
// Poisson references, and the summed model behind the sqrt(li(x)) bound.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sievelab/intervals.hpp"
#include "sievelab/sieve.hpp"

namespace sievelab {

enum class SampleMode { exhaustive, sampled };

std::string_view to_string(SampleMode mode);

struct ShiftModelSummary {
  std::size_t k = 0;
  SampleMode mode = SampleMode::exhaustive;
  u64 samples = 0;
  u64 length = 0;           // l_k
  double mean = 0;          // mean of S(s_k^j, p_k#)
  double variance = 0;      // population (exhaustive) or unbiased (sampled)
  double rescaled_mean = 0;      // (e^gamma / 2) mean
  double rescaled_variance = 0;  // (e^gamma / 2)^2 variance
  std::optional<u64> seed;  // set iff sampled
  // Exact accumulators over the evaluated shifts.
  unsigned __int128 sum = 0;
  unsigned __int128 sum_squares = 0;
  u64 min_count = 0;
  u64 max_count = 0;
  // histogram[c] = number of evaluated shifts with count c, 0 <= c <= l_k.
  std::vector<u64> histogram;
};

struct ShiftModelOptions {
  // Exhaustive when p_k# <= budget, otherwise `budget` random shifts.
  u64 budget = 1'000'000'000;
  u64 seed = 0;
  unsigned threads = 1;
};

ShiftModelSummary shift_model(std::size_t k, const PrimeTable& table,
                              const ShiftModelOptions& options = {});

// The coprime count of the window starting at p_k^2 + j, where j is given by
// its residues mod each of the first k primes (CRT coordinates of j).
u64 shifted_count_from_residues(std::size_t k, std::span<const u64> residues,
                                const PrimeTable& table, std::vector<std::uint8_t>& scratch);

// Residues of the random shift used for sample `index` under `seed`. Each
// sample owns a generator seeded from (seed, index) so any partition of the
// sample range reproduces the same draws.
std::vector<u64> sample_shift_residues(std::size_t k, u64 seed, u64 index,
                                       const PrimeTable& table);

enum class ReferenceKind { binomial, poisson };

struct ReferenceDistribution {
  ReferenceKind kind = ReferenceKind::binomial;
  u64 trials = 0;         // l_k (binomial only)
  double success_p = 0;   // 1 / log p_{k+1}^2
  double mean = 0;
  double variance = 0;
};

ReferenceDistribution binomial_reference(std::size_t k, const PrimeTable& table);
ReferenceDistribution poisson_reference(std::size_t k, const PrimeTable& table);

// sigma_k(n) = sqrt(n p (1 - p)), p = 1 / log p_{k+1}^2, 0 <= n <= l_k.
double binomial_sigma(std::size_t k, u64 n, const PrimeTable& table);

// Binomial(l_k, p) probability mass at n.
double binomial_pmf(u64 trials, double p, u64 n);

struct VarianceRow {
  std::size_t k = 0;
  SampleMode mode = SampleMode::exhaustive;
  double model_stdev = 0;      // sqrt of the rescaled model variance
  double binomial_stdev = 0;
  // Standard error of the rescaled variance estimate (0 when exhaustive).
  double variance_stderr = 0;
  // binomial variance minus rescaled variance, in standard errors; infinite
  // when exhaustive and positive.
  double margin_sigmas = 0;
  bool violated = false;     // rescaled variance not below the binomial variance
  bool significant = false;  // below the binomial variance by at least 3 standard errors
};

std::vector<VarianceRow> variance_comparison(std::span<const std::size_t> ks,
                                             const PrimeTable& table,
                                             const ShiftModelOptions& options = {});

struct SumModelBounds {
  double mu = 0;           // PNT-rescaled model mean at x
  double sigma_bound = 0;  // sqrt of the summed Poisson variances
};

// Both sums run over s_1..s_{k-1} plus the fractional part of s_k, k = locate(x).
// count_offset adds the primes 2 and 3 to mu.
SumModelBounds sum_model_bounds(u64 x, const IntervalSet& set, const PrimeTable& table,
                                bool count_offset = false);

struct ConjectureRow {
  std::size_t k = 0;
  u64 x = 0;             // p_{k+1}^2
  double pi_minus_li = 0;
  double sqrt_li = 0;
};

struct ConjectureScan {
  std::vector<ConjectureRow> rows;
  std::vector<std::size_t> violations;  // k with |pi(x) - li(x)| >= sqrt(li(x))
};

ConjectureScan conjecture_check(const IntervalSet& set);

}  // namespace sievelab
