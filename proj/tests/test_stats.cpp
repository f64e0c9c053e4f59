#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sievelab/analytic.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/stats.hpp"

using namespace sievelab;

TEST_SUITE("stats") {

TEST_CASE("series validation") {
  ScanSeries s;
  s.label = "t";
  s.points = {{1, 2}, {2, 3}};
  CHECK_NOTHROW(s.validate());
  s.points.push_back({2, 4});
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.points.back() = {3, std::nan("")};
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("Gaussian fit by moments uses the unbiased deviation") {
  const std::vector<double> two{-1.0, 1.0};
  const auto f = gaussian_fit(two);
  CHECK(f.mean == 0.0);
  CHECK(f.stdev == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.sample_count == 2);
}

TEST_CASE("Maier scan geometry for the Example table") {
  const auto table = build_prime_table_for_count(1001);
  const auto s500 = maier_scan(500, 3.0, 0, table);
  CHECK(std::lround(s500.phi_lo) == 4380);
  CHECK(std::lround(s500.phi_hi) == 4384);
  CHECK(s500.step == static_cast<u64>(std::ceil(s500.phi_lo / 100.0)));
  const auto s750 = maier_scan(750, 3.0, 0, table);
  CHECK(std::lround(s750.phi_lo) == 5172);
  CHECK(s750.phi_lo / 91152.0 == doctest::Approx(0.057).epsilon(0.01));
  s500.ratios.validate();
}

TEST_CASE("property: Maier ratios round-trip to exact prime increments") {
  const auto table = build_prime_table_for_count(400);
  const auto sieve = oracle::eratosthenes(checked_square(table.p(301)));
  std::vector<u64> cum(sieve.size() + 1, 0);
  for (std::size_t i = 0; i < sieve.size(); ++i) cum[i + 1] = cum[i] + sieve[i];
  auto pi = [&](u64 v) { return cum[v + 1]; };
  for (std::size_t k : {120u, 200u, 300u}) {
    const auto scan = maier_scan(k, 2.5, 7, table);
    REQUIRE(scan.counts.size() == scan.ratios.points.size());
    const u64 end = checked_square(table.p(k + 1));
    for (std::size_t i = 0; i < scan.counts.size(); ++i) {
      const double x = scan.ratios.points[i].first;
      const double phi = std::pow(std::log(x), 2.5);
      REQUIRE(x + phi < static_cast<double>(end));
      const u64 back = static_cast<u64>(
          std::llround(scan.ratios.points[i].second * std::pow(std::log(x), 1.5)));
      REQUIRE(back == scan.counts[i]);
      REQUIRE(back == pi(static_cast<u64>(std::floor(x + phi))) - pi(static_cast<u64>(x)));
    }
    // The next step would leave the interval.
    const double last = scan.ratios.points.back().first + 7;
    CHECK(last + std::pow(std::log(last), 2.5) >= static_cast<double>(end));
  }
}

TEST_CASE("Maier scan rejects windows longer than the interval") {
  const auto table = build_prime_table_for_count(100);
  CHECK_THROWS_AS(maier_scan(10, 3.0, 0, table), DomainError);
}

TEST_CASE("delta_lambda is the smallest two-sided deviation") {
  MaierScan a, b;
  a.two_sided_deviation = 0.2;
  b.two_sided_deviation = 0.07;
  const std::vector<MaierScan> v{a, b};
  CHECK(delta_lambda(v) == 0.07);
}

TEST_CASE("interval lengths against Phi") {
  const auto table = build_prime_table(200'000);
  // Every record sits on the curve of its own gap class.
  for (std::size_t k = 1; k < 2000; ++k) {
    const double x = static_cast<double>(checked_square(table.p(k + 1)));
    const double g = static_cast<double>(table.p(k + 1) - table.p(k));
    REQUIRE(gap_class_length(x, g) ==
            static_cast<double>(checked_square(table.p(k + 1)) - checked_square(table.p(k))));
  }
  const u64 x_max = 10'000'000'000ull;
  const auto series = phi_vs_lengths(x_max, 3.0, table);
  series.validate();
  REQUIRE(series.points.size() > 5);
  // g = 2: independent bisection on (log x)^3 = 4 sqrt(x) - 4 in u = log x.
  auto f = [](double u) { return 4.0 * std::exp(u / 2) - 4.0 - u * u * u; };
  double lo = 10, hi = 60;
  REQUIRE(f(lo) < 0);
  REQUIRE(f(hi) > 0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  CHECK(series.points[1].first == 2.0);
  CHECK(series.points[1].second == doctest::Approx(std::exp(hi)).epsilon(1e-9));
  // Beyond the crossing of the largest gap class, every interval outgrows Phi.
  const double beyond = series.points.back().second;
  double widest = 0;
  for (const auto& [g, x] : series.points) widest = std::max(widest, x);
  for (std::size_t k = 1; k + 1 < table.size(); ++k) {
    const double x = static_cast<double>(checked_square(table.p(k + 1)));
    if (x > x_max) break;
    if (x <= widest) continue;
    const double l = static_cast<double>(checked_square(table.p(k + 1)) - checked_square(table.p(k)));
    REQUIRE(maier_phi(x, 3.0) < l);
  }
  CHECK(beyond > 0);
}

TEST_CASE("moving average") {
  const std::vector<double> v{1, 5, 2, 8, 3};
  CHECK(moving_average(v, 1) == v);
  const std::vector<double> flat(50, 3.25);
  for (double m : moving_average(flat, 7)) CHECK(m == 3.25);
  const auto m3 = moving_average(v, 3);
  CHECK(m3[0] == doctest::Approx(3.0));
  CHECK(m3[2] == doctest::Approx(5.0));
  CHECK(m3[4] == doctest::Approx(5.5));
  CHECK_THROWS_AS(moving_average(std::vector<double>{}, 1), DomainError);
  CHECK_THROWS_AS(moving_average(v, 6), DomainError);
}

TEST_CASE("empirical pdf") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  std::vector<double> samples(200'000);
  for (auto& s : samples) s = normal(gen);
  const auto pdf = empirical_pdf(samples, 80);
  double integral = 0;
  for (const auto& pt : pdf.histogram.points) integral += pt.second * pdf.bin_width;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(pdf.fit.mean) < 0.05);
  CHECK(std::fabs(pdf.fit.stdev - 1.0) < 0.05);
  pdf.histogram.validate();

  const std::vector<double> same(10, 4.0);
  const auto degenerate = empirical_pdf(same, 20);
  CHECK(degenerate.fit.stdev == 0.0);
  CHECK(degenerate.histogram.points.size() == 1);
  CHECK(degenerate.histogram.points[0].second * degenerate.bin_width == 1.0);
  CHECK_THROWS_AS(empirical_pdf(std::vector<double>{1.0}, 5), DomainError);

  const std::vector<double> values{0, 1, 2}, weights{1, 2, 1};
  const auto w = empirical_pdf_weighted(values, weights, 3);
  CHECK(w.fit.mean == doctest::Approx(1.0));
  CHECK(w.fit.stdev == doctest::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("lag correlation") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal;
  std::vector<double> noise(20'000);
  for (auto& v : noise) v = normal(gen);
  const auto c = lag_correlation(noise, 50);
  CHECK(c.points[0].second == 1.0);
  const double limit = 4.0 / std::sqrt(static_cast<double>(noise.size()));
  for (std::size_t j = 1; j <= 50; ++j) REQUIRE(std::fabs(c.points[j].second) < limit);
  std::vector<double> alternating(1000);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2 ? 1.0 : -1.0;
  const auto a = lag_correlation(alternating, 2);
  CHECK(a.points[1].second == doctest::Approx(-1.0));
  CHECK(a.points[2].second == doctest::Approx(1.0));
  const auto blocks = block_lag_correlation(noise, 1, 5000);
  CHECK(blocks.points.size() == 4);
  for (const auto& [b, v] : blocks.points) CHECK(std::fabs(v) < 4.0 / std::sqrt(5000.0));
  CHECK_THROWS_AS(lag_correlation(std::vector<double>{1, 2}, 2), DomainError);
}

TEST_CASE("bias series ordering and normalisation") {
  const auto table = build_prime_table_for_count(3001);
  const auto set = build_intervals(3000, table);
  const auto bias = bias_series(set, table);
  REQUIRE(bias.rows.size() == 3000);
  long double lower = 0, upper = 0, li_sum = 0;
  for (const auto& r : bias.rows) {
    const auto& rec = set.at(r.k);
    lower += rec.pnt_estimate;
    upper += static_cast<long double>(rec.length) / (2.0L * std::log(static_cast<long double>(rec.p_k)));
    li_sum += rec.li_k;
    REQUIRE(lower < li_sum);
    REQUIRE(li_sum < upper);
    REQUIRE(r.c < 0);
    REQUIRE(r.b > 0);
    REQUIRE(r.a_norm == doctest::Approx(r.a / r.delta));
    if (r.k >= 100) {
      REQUIRE(r.c_norm > -1.2);
      REQUIRE(r.c_norm < -0.8);
      REQUIRE(r.b_norm > 0.8);
      REQUIRE(r.b_norm < 1.2);
    }
  }
  const auto& r1 = bias.rows[0];
  CHECK(r1.a == doctest::Approx(4.0 - static_cast<double>(oracle::li(9))).epsilon(1e-12));
}

TEST_CASE("polynomial and power-law fits") {
  std::vector<double> x, y;
  for (int i = 1; i <= 30; ++i) {
    x.push_back(i);
    y.push_back(2.0 - 3.0 * i + 0.5 * i * i);
  }
  const auto fit = polynomial_fit(x, y, 2);
  CHECK(fit.coefficients[0] == doctest::Approx(2.0));
  CHECK(fit.coefficients[1] == doctest::Approx(-3.0));
  CHECK(fit.coefficients[2] == doctest::Approx(0.5));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit(10.0) == doctest::Approx(22.0));
  std::vector<double> p;
  for (double v : x) p.push_back(7.0 * std::pow(v, 2.5));
  CHECK(power_law_exponent(x, p) == doctest::Approx(2.5));
  CHECK_THROWS_AS(polynomial_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 2),
                  DomainError);
}

}
