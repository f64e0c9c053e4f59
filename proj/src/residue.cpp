#include "sievelab/residue.hpp"

#include <limits>

#include <fmt/format.h>

#include "sievelab/analytic.hpp"
#include "sievelab/errors.hpp"

namespace sievelab {

namespace {

void require_k(std::size_t k, const PrimeTable& table) {
  if (k == 0) throw DomainError("k must be >= 1");
  if (k > table.size())
    throw DomainError(fmt::format("k = {} exceeds the {} primes in the table", k, table.size()));
}

// Depth-first walk over squarefree d = q_1 q_2 ... (q ascending from primes)
// with d <= limit. visit(d, sign) is called for every admissible d, d = 1
// first. Returns the number of admissible terms; throws past cap.
template <class Visit>
u64 walk_squarefree(std::span<const u64> primes, u64 limit, u64 cap, Visit&& visit) {
  u64 terms = 0;
  struct Frame {
    std::size_t next;
    u64 d;
    int sign;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 1, 1});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (++terms > cap)
      throw ResourceError(fmt::format("Legendre expansion exceeds {} terms", cap));
    visit(f.d, f.sign);
    // Children are pushed in reverse so they pop in ascending prime order.
    std::size_t end = f.next;
    while (end < primes.size() && primes[end] <= limit / f.d) ++end;
    for (std::size_t j = end; j > f.next; --j)
      stack.push_back({j, f.d * primes[j - 1], -f.sign});
  }
  return terms;
}

}  // namespace

std::string_view to_string(CountMethod method) {
  switch (method) {
    case CountMethod::direct: return "direct";
    case CountMethod::legendre_full: return "legendre_full";
    case CountMethod::legendre_truncated: return "legendre_truncated";
  }
  return "unknown";
}

Window shifted_interval(std::size_t k, u64 j, const PrimeTable& table) {
  require_k(k + 1, table);
  if (const auto period = primorial_u64(k, table); period && j >= *period)
    throw DomainError(fmt::format("shift {} not below p_{}# = {}", j, k, *period));
  Window w;
  w.lo = checked_square(table.p(k)) + j;
  w.hi = checked_square(table.p(k + 1)) - 1 + j;
  w.shift = Shift{k, j};
  return w;
}

BigInt primorial(std::size_t k, const PrimeTable& table) {
  BigInt value = 1;
  for (u64 p : table.first(k)) value *= p;
  return value;
}

std::optional<u64> primorial_u64(std::size_t k, const PrimeTable& table) {
  u64 value = 1;
  for (u64 p : table.first(k)) {
    if (value > (u64{1} << 63) / p) return std::nullopt;
    value *= p;
  }
  if (value >= (u64{1} << 63)) return std::nullopt;
  return value;
}

u64 rho(std::size_t i, u64 n, const PrimeTable& table) {
  if (n == 0) throw DomainError("rho needs n >= 1");
  const u64 p = table.p(i);
  return n % p == 0 ? p : 1;
}

BigInt big_r(std::size_t k, u64 n, const PrimeTable& table) {
  if (n == 0) throw DomainError("R_k needs n >= 1");
  BigInt value = 1;
  for (u64 p : table.first(k))
    if (n % p == 0) value *= p;
  return value;
}

CoprimeCount count_coprime_direct(const Window& window, std::size_t k,
                                  const PrimeTable& table, const SieveConfig& config) {
  require_k(k, table);
  if (window.lo == 0 || window.hi < window.lo)
    throw DomainError("window must satisfy 1 <= lo <= hi");
  if (window.length() > config.memory_budget)
    throw ResourceError(fmt::format("window of {} entries exceeds memory budget {}",
                                    window.length(), config.memory_budget));
  CoprimeCount out;
  out.window = window;
  out.k = k;
  out.method = CountMethod::direct;
  out.count = count_coprime_in(window.lo, window.hi, table.first(k), config);
  return out;
}

CoprimeCount count_coprime_legendre(const Window& window, std::size_t k,
                                    const PrimeTable& table, const LegendreOptions& options) {
  require_k(k, table);
  if (window.lo == 0 || window.hi < window.lo)
    throw DomainError("window must satisfy 1 <= lo <= hi");
  u64 limit = window.hi;
  if (options.truncate_below) {
    if (*options.truncate_below == 0) throw DomainError("truncation bound must be >= 1");
    limit = std::min(limit, *options.truncate_below - 1);
  }
  const u64 below = window.lo - 1;
  // Signed partial sums stay within [-terms * hi, terms * hi].
  __int128 sum = 0;
  CoprimeCount out;
  out.window = window;
  out.k = k;
  out.method = options.truncate_below ? CountMethod::legendre_truncated
                                      : CountMethod::legendre_full;
  out.terms_evaluated = walk_squarefree(table.first(k), limit, options.term_cap,
                                        [&](u64 d, int sign) {
                                          const u64 in_window = window.hi / d - below / d;
                                          sum += sign > 0 ? static_cast<__int128>(in_window)
                                                          : -static_cast<__int128>(in_window);
                                        });
  out.count = static_cast<std::int64_t>(sum);
  return out;
}

double expected_legendre(u64 window_length, std::size_t k, const PrimeTable& table) {
  require_k(k, table);
  return static_cast<double>(window_length) * mertens_products(k, table).back();
}

BigInt legendre_term_count(std::size_t k, std::optional<u64> bound, const PrimeTable& table) {
  require_k(k, table);
  if (!bound) return BigInt(1) << static_cast<unsigned>(k);
  if (*bound <= 1) return 0;
  return walk_squarefree(table.first(k), *bound - 1, std::numeric_limits<u64>::max(),
                         [](u64, int) {});
}

TruncatedEulerEstimate truncated_euler_estimate(std::size_t k, const PrimeTable& table,
                                                std::optional<u64> bound) {
  require_k(k + 1, table);
  TruncatedEulerEstimate out;
  out.k = k;
  out.bound = bound ? *bound : checked_square(table.p(k + 1));
  if (out.bound <= 1) throw DomainError("truncation bound must exceed 1");
  long double sum = 0;
  out.terms = walk_squarefree(table.first(k), out.bound - 1, std::numeric_limits<u64>::max(),
                              [&](u64 d, int sign) {
                                sum += static_cast<long double>(sign) /
                                       static_cast<long double>(d);
                              });
  out.mobius_sum = static_cast<double>(sum);
  const u64 length = checked_square(table.p(k + 1)) - checked_square(table.p(k));
  out.estimate = static_cast<double>(static_cast<long double>(length) * sum);
  return out;
}

FirstAppearance first_appearance_positions(std::size_t i, const PrimeTable& table,
                                           std::size_t k_first, std::size_t k_last) {
  require_k(i, table);
  if (k_last < k_first) throw DomainError("empty k range");
  const u64 p = table.p(i);
  FirstAppearance out;
  out.i = i;
  for (std::size_t k = std::max(k_first, i + 1); k <= k_last; ++k) {
    const u64 r = checked_square(table.p(k)) % p;
    out.observed.insert((p - r) % p + 1);
  }
  for (std::size_t j = 1; j <= table.size(); ++j) {
    if (j == i) continue;
    const u64 q = table.p(j) % p;
    const u64 m = q * q % p;
    out.candidates.insert(p - m + 1);
  }
  return out;
}

}  // namespace sievelab
