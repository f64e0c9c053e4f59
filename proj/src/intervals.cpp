#include "sievelab/intervals.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sievelab/analytic.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/parallel.hpp"

namespace sievelab {

IntervalRecord make_interval_record(std::size_t k, u64 pi_k, const PrimeTable& table) {
  if (k == 0) throw DomainError("interval index k must be >= 1");
  IntervalRecord r;
  r.k = k;
  r.p_k = table.p(k);
  r.p_next = table.p(k + 1);
  r.gap = r.p_next - r.p_k;
  r.length = checked_square(r.p_next) - checked_square(r.p_k);
  r.pi_k = pi_k;
  r.li_k = li_k(k, table);
  r.pnt_estimate = static_cast<double>(r.length) /
                   (2.0 * std::log(static_cast<double>(r.p_next)));
  return r;
}

u64 count_interval_primes(std::size_t k, const PrimeTable& table, const SieveConfig& config) {
  if (k == 0) throw DomainError("interval index k must be >= 1");
  const u64 lo = checked_square(table.p(k));
  const u64 hi = checked_square(table.p(k + 1)) - 1;
  if (hi - lo + 1 > config.memory_budget)
    throw ResourceError(fmt::format("s_{} has {} entries, over the memory budget {}", k,
                                    hi - lo + 1, config.memory_budget));
  return count_primes_in(lo, hi, table.first(k), config);
}

IntervalSet::IntervalSet(std::vector<IntervalRecord> records)
    : records_(std::move(records)), pi_prefix_(records_.size() + 1, 0) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].k != i + 1)
      throw DomainError(fmt::format("interval records not contiguous at position {}", i));
    if (i > 0 && records_[i - 1].p_next != records_[i].p_k)
      throw DomainError(fmt::format("record {} does not start where {} ends", i + 1, i));
    pi_prefix_[i + 1] = pi_prefix_[i] + records_[i].pi_k;
  }
}

const IntervalRecord& IntervalSet::at(std::size_t k) const {
  if (k == 0 || k > records_.size())
    throw DomainError(fmt::format("interval {} outside set of {}", k, records_.size()));
  return records_[k - 1];
}

u64 IntervalSet::pi_upto_end(std::size_t k) const {
  if (k == 0 || k > records_.size())
    throw DomainError(fmt::format("interval {} outside set of {}", k, records_.size()));
  return 2 + pi_prefix_[k];
}

std::vector<IntervalRecord> build_interval_records(std::size_t k_begin, std::size_t k_end,
                                                   const PrimeTable& table,
                                                   const SieveConfig& config) {
  if (k_begin == 0 || k_end < k_begin)
    throw DomainError("interval range must satisfy 1 <= k_begin <= k_end");
  if (table.size() < k_end + 1)
    throw ResourceError(fmt::format("table holds {} primes, intervals up to {} need {}",
                                    table.size(), k_end, k_end + 1));
  const std::size_t n = k_end - k_begin + 1;
  std::vector<IntervalRecord> out(n);
  SieveConfig inner = config;
  inner.threads = 1;
  parallel_strided(n, config.threads, [&](std::size_t i, std::size_t) {
    const std::size_t k = k_begin + i;
    out[i] = make_interval_record(k, count_interval_primes(k, table, inner), table);
  });
  return out;
}

IntervalSet build_intervals(std::size_t k_max, const PrimeTable& table,
                            const SieveConfig& config) {
  if (k_max == 0) throw DomainError("K_max must be >= 1");
  return IntervalSet(build_interval_records(1, k_max, table, config));
}

std::size_t locate_interval(u64 x, const IntervalSet& set) {
  const auto& recs = set.records();
  if (recs.empty() || x < recs.front().lo() || x > recs.back().hi())
    throw DomainError(fmt::format("{} outside the covered intervals", x));
  auto it = std::upper_bound(recs.begin(), recs.end(), x,
                             [](u64 v, const IntervalRecord& r) { return v < r.lo(); });
  return static_cast<std::size_t>(it - recs.begin());
}

PartialCounts partial_counts(u64 x, const IntervalSet& set, const PrimeTable& table,
                             const SieveConfig& config) {
  PartialCounts out;
  out.k = locate_interval(x, set);
  const auto& rec = set.at(out.k);
  out.pi_partial = count_primes_in(rec.lo(), x, table.first(out.k), config);
  out.li_partial = log_integral_between<double>(static_cast<double>(rec.lo()),
                                                static_cast<double>(x));
  return out;
}

GapSeries gap_series(std::size_t k, const IntervalSet& set, const PrimeTable& table,
                     const SieveConfig& config) {
  const auto& rec = set.at(k);
  const auto primes = primes_in(rec.lo(), rec.hi(), table.first(k), config);
  GapSeries out;
  out.k = k;
  out.expected_gap = 2.0 * std::log(static_cast<double>(rec.p_next));
  for (std::size_t i = 0; i + 1 < primes.size(); ++i)
    out.gaps.emplace_back(primes[i], primes[i + 1] - primes[i]);
  if (!out.gaps.empty())
    out.mean_gap = static_cast<double>(primes.back() - primes.front()) /
                   static_cast<double>(out.gaps.size());
  return out;
}

}  // namespace sievelab
