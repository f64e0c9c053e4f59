#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/sieve.hpp"

using namespace sievelab;

TEST_SUITE("sieve") {

TEST_CASE("small prime tables") {
  CHECK(build_prime_table(10).primes().size() == 4);
  const auto ten = build_prime_table(10);
  CHECK(std::vector<u64>(ten.primes().begin(), ten.primes().end()) == std::vector<u64>{2, 3, 5, 7});
  const auto two = build_prime_table(2);
  REQUIRE(two.size() == 1);
  CHECK(two.p(1) == 2);
  const auto hundred = build_prime_table(100);
  CHECK(hundred.size() == 25);
  CHECK(hundred.p(25) == 97);
  CHECK(std::vector<u64>(hundred.primes().begin(), hundred.primes().end()) ==
        oracle::first_primes(25));
}

TEST_CASE("table is the full list of primes up to its bound") {
  const auto table = build_prime_table(50'000);
  const auto sieve = oracle::eratosthenes(50'000);
  std::vector<u64> expected;
  for (u64 n = 2; n <= 50'000; ++n)
    if (sieve[n]) expected.push_back(n);
  CHECK(std::vector<u64>(table.primes().begin(), table.primes().end()) == expected);
}

TEST_CASE("one-based indexing") {
  const auto table = build_prime_table_for_count(600);
  CHECK(table.p(1) == 2);
  CHECK(table.p(2) == 3);
  CHECK(table.p(3) == 5);
  CHECK(nth_prime(1, table) == 2);
  CHECK(nth_prime(3, table) == 5);
  CHECK(nth_prime(500, table) == 3571);
  CHECK_THROWS_AS(table.p(0), DomainError);
  CHECK_THROWS_AS(table.p(table.size() + 1), DomainError);
}

TEST_CASE("sieve_window keeps exactly the integers coprime to the sieving primes") {
  const auto table = build_prime_table(100);
  auto list = [](const SieveWindow& w) { return w.survivors(); };
  CHECK(list(sieve_window(25, 48, table.first(3))) == std::vector<u64>{29, 31, 37, 41, 43, 47});
  CHECK(sieve_window(4, 4, table.first(1)).count() == 0);
  CHECK(list(sieve_window(9, 24, table.first(2))) == std::vector<u64>{11, 13, 17, 19, 23});
  // The sieving primes themselves are removed.
  CHECK_FALSE(sieve_window(2, 30, table.first(3)).survives(5));
  CHECK_THROWS_AS(sieve_window(1, 10, table.first(2)), DomainError);
  CHECK_THROWS_AS(sieve_window(10, 9, table.first(2)), DomainError);
}

TEST_CASE("property: sieve_window survivors equal the gcd filter") {
  const auto table = build_prime_table(200);
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 200; ++trial) {
    const u64 lo = oracle::uniform(gen, 2, 200'000);
    const u64 hi = lo + oracle::uniform(gen, 0, 10'000);
    const std::size_t k = oracle::uniform(gen, 1, 12);
    SieveConfig cfg;
    cfg.segment_size = oracle::uniform(gen, 64, 5000);
    const auto w = sieve_window(lo, hi, table.first(k), cfg);
    const std::vector<u64> primes(table.first(k).begin(), table.first(k).end());
    REQUIRE(w.count() == oracle::coprime_count(lo, hi, primes));
    for (int probe = 0; probe < 20; ++probe) {
      const u64 n = oracle::uniform(gen, lo, hi);
      bool coprime = true;
      for (u64 p : primes) coprime = coprime && n % p != 0;
      REQUIRE(w.survives(n) == coprime);
    }
    REQUIRE(count_coprime_in(lo, hi, table.first(k), cfg) == w.count());
  }
}

TEST_CASE("prime counts") {
  const auto table = build_prime_table(10'000);
  CHECK(count_primes_upto(10, table) == 4);
  CHECK(count_primes_upto(100, table) == 25);
  CHECK(count_primes_upto(2, table) == 1);
  CHECK(count_primes_upto(1, table) == 0);
  const u64 n = 10'000'000;
  const auto sieve = oracle::eratosthenes(n);
  u64 expected = 0;
  for (u64 i = 0; i <= n; ++i) expected += sieve[i];
  CHECK(count_primes_upto(n, table) == expected);
  CHECK_THROWS_AS(count_primes_upto(10'001ull * 10'001ull, table), DomainError);
}

TEST_CASE("property: count_primes_upto(p_k) == k") {
  const auto table = build_prime_table(20'000);
  for (std::size_t k = 1; k <= table.size(); k += 37) CHECK(count_primes_upto(table.p(k), table) == k);
}

TEST_CASE("property: segmentation and threads do not change counts") {
  const auto table = build_prime_table(40'000);
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    const u64 lo = oracle::uniform(gen, 2, 1'000'000'000);
    const u64 hi = lo + oracle::uniform(gen, 0, 3'000'000);
    SieveConfig a, b;
    a.segment_size = 1 << 20;
    b.segment_size = oracle::uniform(gen, 64, 100'000);
    const u64 whole = count_primes_in(lo, hi, table.primes(), a);
    REQUIRE(whole == count_primes_in(lo, hi, table.primes(), b));
    const u64 mid = oracle::uniform(gen, lo, hi);
    const u64 split = count_primes_in(lo, mid, table.primes(), b) +
                      (mid < hi ? count_primes_in(mid + 1, hi, table.primes(), a) : 0);
    REQUIRE(whole == split);
  }
  const u64 x = 300'000'000;
  SieveConfig one, four;
  four.threads = 4;
  CHECK(count_primes_upto(x, table, one) == count_primes_upto(x, table, four));
}

TEST_CASE("count_primes_in keeps listed primes inside the window") {
  const auto table = build_prime_table(100);
  CHECK(count_primes_in(2, 97, table.primes()) == 25);
  CHECK(primes_in(2, 20, table.first(2)) == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19});
  for (u64 lo = 2; lo < 400; lo += 7)
    CHECK(count_primes_in(lo, lo + 500, build_prime_table(30).primes()) ==
          oracle::count_primes(lo, lo + 500));
}

TEST_CASE("overflow and resource limits") {
  CHECK(checked_square(4'294'967'295ull) == 18'446'744'065'119'617'025ull);
  CHECK_THROWS_AS(checked_square(4'294'967'296ull), ResourceError);
  SieveConfig tiny;
  tiny.memory_budget = 100;
  CHECK_THROWS_AS(sieve_window(2, 1000, build_prime_table(10).primes(), tiny), ResourceError);
}

}
