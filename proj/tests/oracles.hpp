#pragma once

// Independent reference implementations for the test suites. Nothing here
// calls into the library: slow, obvious code only.

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> first_primes(std::size_t count) {
  std::vector<u64> out;
  for (u64 n = 2; out.size() < count; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

// Plain byte sieve; fine up to ~1e8.
inline std::vector<bool> eratosthenes(u64 n) {
  std::vector<bool> is(n + 1, true);
  is[0] = false;
  if (n >= 1) is[1] = false;
  for (u64 i = 2; i * i <= n; ++i)
    if (is[i])
      for (u64 j = i * i; j <= n; j += i) is[j] = false;
  return is;
}

inline u64 count_primes(u64 lo, u64 hi) {
  u64 c = 0;
  for (u64 n = lo; n <= hi; ++n) c += is_prime(n);
  return c;
}

inline u64 coprime_count(u64 lo, u64 hi, const std::vector<u64>& primes) {
  u64 c = 0;
  for (u64 n = lo; n <= hi; ++n) {
    bool ok = true;
    for (u64 p : primes)
      if (std::gcd(n, p) != 1) {
        ok = false;
        break;
      }
    c += ok;
  }
  return c;
}

// prod (1 - 1/p) over the first k primes, exact.
inline boost::multiprecision::cpp_rational mertens_rational(std::size_t k) {
  boost::multiprecision::cpp_rational r = 1;
  for (u64 p : first_primes(k)) r *= boost::multiprecision::cpp_rational(p - 1, p);
  return r;
}

using Float50 = boost::multiprecision::cpp_bin_float_50;

// Li(x) = gamma + ln ln x + sqrt(x) sum_n (-1)^(n-1) (ln x)^n / (n! 2^(n-1))
//         * sum_{j <= (n-1)/2} 1/(2j+1)   (Ramanujan's series)
inline Float50 ramanujan_Li(const Float50& x) {
  const Float50 gamma("0.57721566490153286060651209008240243104215933593992");
  const Float50 L = log(x);
  Float50 sum = 0, term_power = 1, factorial = 1, two_pow = 1, inner = 0;
  const Float50 eps = std::numeric_limits<Float50>::epsilon();
  for (int n = 1; n < 2000; ++n) {
    term_power *= L;
    factorial *= n;
    if (n > 1) two_pow *= 2;
    if ((n - 1) % 2 == 0) inner += Float50(1) / (n);  // 2j+1 = n when n odd
    const Float50 term = ((n % 2 == 1) ? 1 : -1) * term_power / (factorial * two_pow) * inner;
    sum += term;
    if (n > 10 && abs(term) < eps * abs(sum)) break;
  }
  return gamma + log(L) + sqrt(x) * sum;
}

// Offset li(x) = Li(x) - Li(2).
inline Float50 li(const Float50& x) { return ramanujan_Li(x) - ramanujan_Li(Float50(2)); }

// Fixed mapping from generator output to [lo, hi].
inline u64 uniform(std::mt19937_64& gen, u64 lo, u64 hi) {
  const u64 n = hi - lo + 1;
  if (n == 0) return gen();
  const u64 limit = UINT64_MAX - UINT64_MAX % n;
  u64 v;
  do v = gen();
  while (v >= limit);
  return lo + v % n;
}

}  // namespace oracle
