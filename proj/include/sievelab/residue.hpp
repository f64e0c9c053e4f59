#pragma once

// Divisibility patterns modulo the primorial p_k#: rho_i(n), R_k(n), coprime
// counts S(A, p_k#) over windows A, the Legendre (inclusion-exclusion) form of
// those counts and its truncation to divisors below p_{k+1}^2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "sievelab/sieve.hpp"

namespace sievelab {

using BigInt = boost::multiprecision::cpp_int;

struct Shift {
  std::size_t k = 0;
  u64 j = 0;
};

// Inclusive window [lo, hi]; shift is set when the window is s_k^j.
struct Window {
  u64 lo = 1;
  u64 hi = 1;
  std::optional<Shift> shift;

  u64 length() const noexcept { return hi - lo + 1; }
};

// s_k^j = [p_k^2 + j, p_{k+1}^2 - 1 + j], 0 <= j < p_k#.
Window shifted_interval(std::size_t k, u64 j, const PrimeTable& table);

enum class CountMethod { direct, legendre_full, legendre_truncated };

std::string_view to_string(CountMethod method);

struct CoprimeCount {
  Window window;
  std::size_t k = 0;
  // Never negative for direct and full Legendre counts; a truncated expansion
  // is reported as summed.
  std::int64_t count = 0;
  CountMethod method = CountMethod::direct;
  u64 terms_evaluated = 0;  // nonzero inclusion-exclusion terms (Legendre only)
};

// p_k#, exact.
BigInt primorial(std::size_t k, const PrimeTable& table);

// p_k# when it is below 2^63 (k <= 15), nullopt otherwise.
std::optional<u64> primorial_u64(std::size_t k, const PrimeTable& table);

// p_i if p_i | n, else 1.
u64 rho(std::size_t i, u64 n, const PrimeTable& table);

// R_k(n) = prod_{i<=k} rho_i(n); equals 1 iff gcd(n, p_k#) == 1.
BigInt big_r(std::size_t k, u64 n, const PrimeTable& table);

CoprimeCount count_coprime_direct(const Window& window, std::size_t k,
                                  const PrimeTable& table, const SieveConfig& config = {});

struct LegendreOptions {
  // Keep only squarefree divisors d < truncate_below.
  std::optional<u64> truncate_below;
  // Abort with ResourceError beyond this many admissible terms.
  u64 term_cap = u64{1} << 32;
};

// sum over squarefree d | p_k#, d <= hi (and d < truncate_below when set) of
// mu(d) * (floor(hi/d) - floor((lo-1)/d)). Untruncated, this is exactly the
// direct count.
CoprimeCount count_coprime_legendre(const Window& window, std::size_t k,
                                    const PrimeTable& table,
                                    const LegendreOptions& options = {});

// E[S(A, p_k#)] = |A| prod_{p <= p_k} (1 - 1/p).
double expected_legendre(u64 window_length, std::size_t k, const PrimeTable& table);

// Squarefree products of distinct primes from the first k that lie strictly
// below bound (d = 1 included). No bound gives 2^k.
BigInt legendre_term_count(std::size_t k, std::optional<u64> bound, const PrimeTable& table);

struct TruncatedEulerEstimate {
  std::size_t k = 0;
  u64 bound = 0;
  double mobius_sum = 0;  // sum_{d < bound} mu(d)/d
  double estimate = 0;    // l_k * mobius_sum
  u64 terms = 0;
};

// The Euler product prod (1 - 1/p) expanded over squarefree d and cut to
// d < bound, scaled by l_k. Defaults to bound = p_{k+1}^2.
TruncatedEulerEstimate truncated_euler_estimate(std::size_t k, const PrimeTable& table,
                                                std::optional<u64> bound = std::nullopt);

struct FirstAppearance {
  std::size_t i = 0;
  std::set<u64> observed;    // 1-based offset of the first multiple of p_i in s_k
  std::set<u64> candidates;  // p_i - m + 1 for m = p_j^2 mod p_i, j != i
};

// Observed positions over k_first..k_last (only k > i contributes) and the
// theoretical candidate set built from squares of the table's other primes.
FirstAppearance first_appearance_positions(std::size_t i, const PrimeTable& table,
                                           std::size_t k_first, std::size_t k_last);

}  // namespace sievelab
