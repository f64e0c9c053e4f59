#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "oracles.hpp"
#include "sievelab/analytic.hpp"
#include "sievelab/intervals.hpp"
#include "sievelab/quadrature.hpp"

using namespace sievelab;
using Quad = boost::multiprecision::cpp_bin_float_quad;

TEST_SUITE("analytic") {

TEST_CASE("quadrature integrates smooth functions") {
  auto r = integrate<double>([](double t) { return std::exp(t); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  auto s = integrate<double>([](double t) { return 1.0 / t; }, 1.0, 1000.0);
  CHECK(s.value == doctest::Approx(std::log(1000.0)).epsilon(1e-14));
}

TEST_CASE("li at small arguments") {
  CHECK(li<double>(2.0) == 0.0);
  CHECK(li<double>(10.0) == doctest::Approx(5.12043572466980).epsilon(1e-13));
  CHECK(li<double>(10.0) ==
        doctest::Approx(static_cast<double>(oracle::li(10))).epsilon(1e-14));
  CHECK(li<double>(100.0) ==
        doctest::Approx(static_cast<double>(oracle::li(100))).epsilon(1e-14));
  CHECK_THROWS_AS(li<double>(1.5), DomainError);
}

TEST_CASE("li in extended precision matches the series oracle to 1e-9 on [2, 1e12]") {
  QuadratureOptions<Quad> opts;
  opts.rel_tol = Quad("1e-24");
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    // 100 log-spaced points from 2 to 1e12.
    const oracle::Float50 x =
        exp(log(oracle::Float50(2)) +
            (log(oracle::Float50("1e12")) - log(oracle::Float50(2))) * i / 99);
    const Quad got = li<Quad>(Quad(x), opts);
    const oracle::Float50 want = oracle::li(x);
    const double err = static_cast<double>(abs(oracle::Float50(got) - want));
    worst = std::max(worst, err);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("li in double precision stays within 1e-13 relative") {
  for (double x : {3.0, 50.0, 1e3, 1e5, 1e8, 1e10, 1e12, 1e14}) {
    const double want = static_cast<double>(oracle::li(oracle::Float50(x)));
    CHECK(std::fabs(li<double>(x) - want) <= 1e-13 * want);
  }
}

TEST_CASE("li_k examples and telescoping") {
  const auto table = build_prime_table_for_count(3000);
  const double l1 = li_k(1, table);
  CHECK(l1 == doctest::Approx(static_cast<double>(oracle::li(9) - oracle::li(4))).epsilon(1e-13));
  CHECK(l1 > 5.0 / std::log(9.0));
  CHECK(l1 < 5.0 / std::log(4.0));
  long double sum = 0;
  for (std::size_t k = 1; k <= 2000; ++k) sum += li_k(k, table);
  const double x = static_cast<double>(table.p(2001)) * static_cast<double>(table.p(2001));
  const double direct = static_cast<double>(oracle::li(oracle::Float50(x)) - oracle::li(4));
  CHECK(static_cast<double>(sum) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("Mertens products against exact rationals") {
  const auto table = build_prime_table_for_count(2000);
  CHECK(mertens_product(1, table).product == 0.5);
  CHECK(mertens_product(3, table).product == doctest::Approx(4.0 / 15.0).epsilon(1e-16));
  const auto products = mertens_products(1500, table);
  for (std::size_t k : {1u, 2u, 10u, 100u, 500u, 1000u, 1001u, 1500u}) {
    const double exact = static_cast<double>(oracle::mertens_rational(k));
    CHECK(products[k - 1] == doctest::Approx(exact).epsilon(1e-14));
  }
  for (std::size_t k = 1; k < products.size(); ++k) {
    REQUIRE(products[k] < products[k - 1]);
    REQUIRE(products[k] > 0);
  }
}

TEST_CASE("property: Mertens error stays inside its explicit bound") {
  const auto table = build_prime_table_for_count(3001);
  for (std::size_t k = 1; k <= 3000; ++k) {
    const auto m = mertens_product(k, table);
    REQUIRE(std::fabs(m.delta) <= m.delta_bound);
  }
  const auto m = mertens_product(1000, table);
  const double asym = 2.0 * std::exp(-kEulerGamma) / std::log(m.x);
  CHECK(std::fabs(std::log(m.product / asym)) <= m.delta_bound);
}

TEST_CASE("naive and per-interval expectations") {
  const auto table = build_prime_table_for_count(10'000);
  CHECK(naive_expected_pi(25, table) == doctest::Approx(20.0 / 3.0).epsilon(1e-15));
  CHECK(naive_expected_pi(9, table) == doctest::Approx(3.0).epsilon(1e-15));
  const double x = 1e10;
  const double ratio = naive_expected_pi(10'000'000'000ull, table) /
                       (2.0 * std::exp(-kEulerGamma) * x / std::log(x));
  CHECK(std::fabs(ratio - 1.0) < 0.01);
  CHECK(expected_pi_k(1, table) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(expected_pi_k(2, table) == doctest::Approx(16.0 / 3.0).epsilon(1e-15));
  CHECK(expected_pi_k(3, table) == doctest::Approx(6.4).epsilon(1e-15));
  CHECK(pnt_interval_estimate(3, table) == doctest::Approx(24.0 / std::log(49.0)).epsilon(1e-15));
  CHECK(pnt_interval_estimate(1000, table) ==
        doctest::Approx(126768.0 / std::log(7927.0 * 7927.0)).epsilon(1e-15));
}

TEST_CASE("expected_pi_upto interpolates and telescopes") {
  const auto table = build_prime_table_for_count(400);
  const auto set = build_intervals(300, table);
  CHECK(expected_pi_upto(25, set, table) == doctest::Approx(2.5 + 16.0 / 3.0).epsilon(1e-15));
  CHECK(expected_pi_upto(25, set, table, true) ==
        doctest::Approx(2.0 + 2.5 + 16.0 / 3.0).epsilon(1e-15));
  for (std::size_t k = 2; k <= 299; k += 13) {
    double sum = 0;
    for (std::size_t j = 1; j < k; ++j) sum += expected_pi_k(j, table);
    const u64 x = checked_square(table.p(k));
    REQUIRE(expected_pi_upto(x, set, table) == doctest::Approx(sum).epsilon(1e-12));
    // Just below the next square the interpolation is one step short of the full term.
    const u64 y = checked_square(table.p(k + 1)) - 1;
    const double step = expected_pi_k(k, table) / static_cast<double>(set.at(k).length);
    REQUIRE(std::fabs(expected_pi_upto(y, set, table) - (sum + expected_pi_k(k, table))) <=
            step * (1 + 1e-9));
  }
}

TEST_CASE("Delta normalizer") {
  const auto table = build_prime_table_for_count(400);
  CHECK(delta_normalizer(1, table) ==
        doctest::Approx(0.5 * (5.0 / std::log(4.0) - 5.0 / std::log(9.0))).epsilon(1e-14));
  const auto series = delta_normalizer_series(300, table);
  for (std::size_t k = 2; k <= 300; ++k) {
    const double l = static_cast<double>(checked_square(table.p(k + 1)) - checked_square(table.p(k)));
    const double inc = 0.5 * (l / (2 * std::log(static_cast<double>(table.p(k)))) -
                              l / (2 * std::log(static_cast<double>(table.p(k + 1)))));
    REQUIRE(series[k - 1] - series[k - 2] == doctest::Approx(inc).epsilon(1e-9));
    REQUIRE(inc > 0);
  }
}

TEST_CASE("property: sandwich and eta bounds for every k up to 5000") {
  const auto table = build_prime_table_for_count(5001);
  for (std::size_t k = 1; k <= 5000; ++k) {
    const double lk = li_k(k, table);
    REQUIRE(pnt_interval_estimate(k, table) < lk);
    REQUIRE(lk < upper_interval_estimate(k, table));
    REQUIRE(eta(k, table) <= eta_bound(k, table));
  }
}

TEST_CASE("estimator bundle approaches the asymptotic form") {
  const auto table = build_prime_table_for_count(1001);
  const auto b = estimator_bundle(1000, table);
  CHECK(b.tilde_pi_k / b.tilde_pi_k_asym == doctest::Approx(1.0).epsilon(0.02));
  CHECK(b.tilde_pi_k / b.pnt_estimate == doctest::Approx(2.0 * std::exp(-kEulerGamma)).epsilon(0.01));
}

}
