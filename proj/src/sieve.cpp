#include "sievelab/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sievelab/errors.hpp"
#include "sievelab/parallel.hpp"

namespace sievelab {

namespace {

constexpr u64 kNoSquare = std::numeric_limits<u64>::max();

u64 isqrt(u64 x) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && (r > 0xFFFFFFFFull || r * r > x)) --r;
  while (r + 1 <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= x) ++r;
  return r;
}

u64 square_or_max(u64 p) { return p > 0xFFFFFFFFull ? kNoSquare : p * p; }

// Smallest odd multiple of odd p that is >= x.
u64 first_odd_multiple(u64 x, u64 p) {
  u64 m = (x + p - 1) / p * p;
  if ((m & 1) == 0) m += p;
  return m;
}

void check_sorted_primes(std::span<const u64> primes) {
  if (primes.empty()) throw DomainError("sieve primes must be non-empty");
  if (!std::is_sorted(primes.begin(), primes.end()) || primes.front() < 2)
    throw DomainError("sieve primes must be sorted and >= 2");
}

// Walks the odd numbers of [lo, hi] segment by segment. visit(first, flags,
// len) sees flags[i] != 0 iff first + 2i survived. With from_square the
// multiples of p are crossed from p^2, which leaves p itself standing.
template <class Visit>
void sieve_odd_segments(u64 lo, u64 hi, std::span<const u64> odd_primes,
                        bool from_square, std::size_t segment_size,
                        Visit&& visit) {
  u64 first = std::max<u64>(lo, 1);
  if ((first & 1) == 0) ++first;
  u64 last = (hi & 1) ? hi : hi - 1;
  if (hi == 0 || first > last) return;
  const u64 total = (last - first) / 2 + 1;

  std::vector<u64> next(odd_primes.size());
  for (std::size_t i = 0; i < odd_primes.size(); ++i) {
    const u64 p = odd_primes[i];
    u64 m = first_odd_multiple(first, p);
    if (from_square) {
      const u64 sq = square_or_max(p);
      if (sq == kNoSquare || sq > last) {
        next[i] = total;
        continue;
      }
      m = std::max(m, sq);
    }
    next[i] = m > last ? total : (m - first) / 2;
  }

  const std::size_t seg = std::max<std::size_t>(segment_size / 2, 64);
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(std::min<u64>(seg, total)));
  for (u64 start = 0; start < total; start += seg) {
    const auto len = static_cast<std::size_t>(std::min<u64>(seg, total - start));
    std::fill_n(flags.begin(), len, std::uint8_t{1});
    const u64 stop = start + len;
    for (std::size_t i = 0; i < odd_primes.size(); ++i) {
      u64 idx = next[i];
      const u64 p = odd_primes[i];
      for (; idx < stop; idx += p) flags[static_cast<std::size_t>(idx - start)] = 0;
      next[i] = idx;
    }
    visit(first + 2 * start, flags.data(), len);
  }
}

// Every integer of [lo, hi]; coprime semantics only.
template <class Visit>
void sieve_full_segments(u64 lo, u64 hi, std::span<const u64> primes,
                         std::size_t segment_size, Visit&& visit) {
  const u64 total = hi - lo + 1;
  std::vector<u64> next(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 m = (lo + primes[i] - 1) / primes[i] * primes[i];
    next[i] = m > hi ? total : m - lo;
  }
  const std::size_t seg = std::max<std::size_t>(segment_size, 64);
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(std::min<u64>(seg, total)));
  for (u64 start = 0; start < total; start += seg) {
    const auto len = static_cast<std::size_t>(std::min<u64>(seg, total - start));
    std::fill_n(flags.begin(), len, std::uint8_t{1});
    const u64 stop = start + len;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      u64 idx = next[i];
      for (; idx < stop; idx += primes[i]) flags[static_cast<std::size_t>(idx - start)] = 0;
      next[i] = idx;
    }
    visit(lo + start, flags.data(), len);
  }
}

u64 count_flags(const std::uint8_t* flags, std::size_t len) {
  return static_cast<u64>(std::count(flags, flags + len, std::uint8_t{1}));
}

std::span<const u64> drop_two(std::span<const u64> primes) {
  if (!primes.empty() && primes.front() == 2) return primes.subspan(1);
  return primes;
}

}  // namespace

u64 checked_square(u64 p) {
  if (p > 0xFFFFFFFFull)
    throw ResourceError(fmt::format("{}^2 overflows 64-bit range", p));
  return p * p;
}

PrimeTable::PrimeTable(u64 bound, std::vector<u64> primes)
    : bound_(bound), primes_(std::move(primes)) {}

u64 PrimeTable::p(std::size_t k) const {
  if (k == 0 || k > primes_.size())
    throw DomainError(fmt::format("prime index {} outside table of {} primes", k,
                                  primes_.size()));
  return primes_[k - 1];
}

std::span<const u64> PrimeTable::first(std::size_t k) const {
  if (k > primes_.size())
    throw DomainError(fmt::format("table holds only {} primes, {} requested",
                                  primes_.size(), k));
  return std::span<const u64>(primes_).first(k);
}

std::size_t PrimeTable::count_upto(u64 x) const {
  if (x > bound_) throw DomainError(fmt::format("{} exceeds table bound {}", x, bound_));
  return static_cast<std::size_t>(
      std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

PrimeTable build_prime_table(u64 bound, const SieveConfig& config) {
  if (bound < 2) throw DomainError("prime table bound must be >= 2");
  if (bound > config.memory_budget)
    throw ResourceError(fmt::format("prime table bound {} exceeds memory budget {}",
                                    bound, config.memory_budget));
  // odd n = 2i + 1
  const u64 half = bound / 2 + 1;
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(half), 0);
  for (u64 i = 1; (2 * i + 1) * (2 * i + 1) <= bound; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    for (u64 j = p * p / 2; j < half; j += p) composite[j] = 1;
  }
  std::vector<u64> primes{2};
  for (u64 i = 1; i < half; ++i)
    if (!composite[i] && 2 * i + 1 <= bound) primes.push_back(2 * i + 1);
  return PrimeTable(bound, std::move(primes));
}

PrimeTable build_prime_table_for_count(std::size_t count, const SieveConfig& config) {
  const double n = static_cast<double>(std::max<std::size_t>(count, 6));
  auto bound = static_cast<u64>(n * (std::log(n) + std::log(std::log(n)))) + 16;
  for (;;) {
    PrimeTable table = build_prime_table(bound, config);
    if (table.size() >= count) return table;
    bound *= 2;
  }
}

SieveWindow::SieveWindow(u64 lo, u64 hi, std::vector<u64> words)
    : lo_(lo), hi_(hi), words_(std::move(words)) {}

bool SieveWindow::survives(u64 n) const {
  if (n < lo_ || n > hi_) throw DomainError(fmt::format("{} outside window", n));
  const u64 i = n - lo_;
  return (words_[i / 64] >> (i % 64)) & 1;
}

u64 SieveWindow::count() const {
  u64 c = 0;
  for (u64 w : words_) c += static_cast<u64>(std::popcount(w));
  return c;
}

std::vector<u64> SieveWindow::survivors() const {
  std::vector<u64> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    u64 bits = words_[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(lo_ + 64 * w + static_cast<u64>(b));
      bits &= bits - 1;
    }
  }
  return out;
}

SieveWindow sieve_window(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                         const SieveConfig& config) {
  if (lo < 2 || hi < lo) throw DomainError("sieve window requires 2 <= lo <= hi");
  check_sorted_primes(sieve_primes);
  if (hi - lo + 1 > config.memory_budget)
    throw ResourceError(fmt::format("window of {} entries exceeds memory budget {}",
                                    hi - lo + 1, config.memory_budget));
  // Start from all-clear and set survivors.
  std::vector<u64> words(static_cast<std::size_t>((hi - lo) / 64 + 1), 0);
  auto mark = [&](u64 first, const std::uint8_t* flags, std::size_t len, u64 stride) {
    for (std::size_t i = 0; i < len; ++i) {
      if (!flags[i]) continue;
      const u64 off = first + stride * i - lo;
      words[off / 64] |= u64{1} << (off % 64);
    }
  };
  if (sieve_primes.front() == 2) {
    sieve_odd_segments(lo, hi, drop_two(sieve_primes), false, config.segment_size,
                       [&](u64 f, const std::uint8_t* fl, std::size_t n) { mark(f, fl, n, 2); });
  } else {
    sieve_full_segments(lo, hi, sieve_primes, config.segment_size,
                        [&](u64 f, const std::uint8_t* fl, std::size_t n) { mark(f, fl, n, 1); });
  }
  return SieveWindow(lo, hi, std::move(words));
}

u64 count_coprime_in(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                     const SieveConfig& config) {
  if (lo < 1 || hi < lo) throw DomainError("coprime count requires 1 <= lo <= hi");
  check_sorted_primes(sieve_primes);
  u64 count = 0;
  auto add = [&](u64, const std::uint8_t* flags, std::size_t len) {
    count += count_flags(flags, len);
  };
  if (sieve_primes.front() == 2)
    sieve_odd_segments(lo, hi, drop_two(sieve_primes), false, config.segment_size, add);
  else
    sieve_full_segments(lo, hi, sieve_primes, config.segment_size, add);
  return count;
}

u64 count_primes_in(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                    const SieveConfig& config) {
  if (hi < lo || hi < 2) return 0;
  u64 count = (lo <= 2 && 2 <= hi) ? 1 : 0;
  sieve_odd_segments(std::max<u64>(lo, 3), hi, drop_two(sieve_primes), true,
                     config.segment_size,
                     [&](u64, const std::uint8_t* flags, std::size_t len) {
                       count += count_flags(flags, len);
                     });
  return count;
}

std::vector<u64> primes_in(u64 lo, u64 hi, std::span<const u64> sieve_primes,
                           const SieveConfig& config) {
  std::vector<u64> out;
  if (hi < lo || hi < 2) return out;
  if (lo <= 2) out.push_back(2);
  sieve_odd_segments(std::max<u64>(lo, 3), hi, drop_two(sieve_primes), true,
                     config.segment_size,
                     [&](u64 first, const std::uint8_t* flags, std::size_t len) {
                       for (std::size_t i = 0; i < len; ++i)
                         if (flags[i]) out.push_back(first + 2 * i);
                     });
  return out;
}

u64 count_primes_upto(u64 x, const PrimeTable& table, const SieveConfig& config) {
  const u64 root = isqrt(x);
  if (root > table.bound())
    throw DomainError(fmt::format("pi({}) needs base primes up to {}, table bound is {}",
                                  x, root, table.bound()));
  if (x < 2) return 0;
  const auto base = table.first(table.count_upto(root));
  // Disjoint chunks are summed in a fixed order.
  const unsigned threads = std::max(1u, config.threads);
  const u64 span_len = x - 2;  // numbers 3..x
  const std::size_t chunks = span_len < (u64{1} << 22) ? 1 : threads;
  std::vector<u64> partial(chunks, 0);
  parallel_blocks(chunks, threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t c = b; c < e; ++c) {
      const u64 lo = 3 + span_len * c / chunks;
      const u64 hi = 2 + span_len * (c + 1) / chunks;
      if (lo <= hi) partial[c] = count_primes_in(lo, hi, base, config);
    }
  });
  u64 count = 1;
  for (u64 v : partial) count += v;
  return count;
}

u64 nth_prime(std::size_t k, const PrimeTable& table) { return table.p(k); }

}  // namespace sievelab
