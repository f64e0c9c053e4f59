#include "sievelab/analytic.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sievelab/intervals.hpp"

namespace sievelab {

namespace {

double interval_length(std::size_t k, const PrimeTable& table) {
  const u64 p = table.p(k);
  const u64 q = table.p(k + 1);
  return static_cast<double>(checked_square(q) - checked_square(p));
}

double log_square(u64 p) { return 2.0 * std::log(static_cast<double>(p)); }

void require_k(std::size_t k) {
  if (k == 0) throw DomainError("interval index k must be >= 1");
}

}  // namespace

double li_k(std::size_t k, const PrimeTable& table) {
  require_k(k);
  const u64 lo = checked_square(table.p(k));
  const u64 hi = checked_square(table.p(k + 1));
  return log_integral_between<double>(static_cast<double>(lo), static_cast<double>(hi));
}

std::vector<double> mertens_products(std::size_t k_max, const PrimeTable& table) {
  const auto primes = table.first(k_max);
  std::vector<double> out(k_max);
  long double product = 1.0L;
  // Neumaier-compensated running sum of log(1 - 1/p).
  long double log_sum = 0.0L;
  long double carry = 0.0L;
  for (std::size_t i = 0; i < k_max; ++i) {
    const long double term = std::log1p(-1.0L / static_cast<long double>(primes[i]));
    const long double t = log_sum + term;
    if (std::fabs(log_sum) >= std::fabs(term))
      carry += (log_sum - t) + term;
    else
      carry += (term - t) + log_sum;
    log_sum = t;
    product *= 1.0L - 1.0L / static_cast<long double>(primes[i]);
    const std::size_t k = i + 1;
    out[i] = k <= 1000 ? static_cast<double>(product)
                       : static_cast<double>(std::exp(log_sum + carry));
  }
  return out;
}

double mertens_delta_bound(double x) {
  const double root = std::sqrt(x);
  return 4.0 / std::log(root + 1.0) + 2.0 / (root * std::log(root)) + 0.5 / root;
}

MertensEvaluation mertens_product(std::size_t k, const PrimeTable& table) {
  require_k(k);
  MertensEvaluation m;
  m.k = k;
  m.product = mertens_products(k, table).back();
  m.x = static_cast<double>(checked_square(table.p(k + 1)) - 1);
  m.delta_bound = mertens_delta_bound(m.x);
  m.delta = std::log(m.product * std::log(m.x) / 2.0) + kEulerGamma;
  return m;
}

double naive_expected_pi(u64 x, const PrimeTable& table) {
  if (x < 4) throw DomainError("naive estimate needs x >= 4");
  auto root = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
  while (root * root > x) --root;
  while ((root + 1) * (root + 1) <= x) ++root;
  const std::size_t count = table.count_upto(root);
  return static_cast<double>(x) * mertens_products(count, table).back();
}

double expected_pi_k(std::size_t k, const PrimeTable& table) {
  require_k(k);
  return interval_length(k, table) * mertens_products(k, table).back();
}

double expected_pi_k_asymptotic(std::size_t k, const PrimeTable& table) {
  return 2.0 * std::exp(-kEulerGamma) * pnt_interval_estimate(k, table);
}

double expected_pi_upto(u64 x, const IntervalSet& set, const PrimeTable& table,
                        bool count_offset) {
  const std::size_t k = locate_interval(x, set);
  const auto products = mertens_products(k, table);
  double sum = count_offset ? 2.0 : 0.0;
  for (std::size_t j = 1; j < k; ++j)
    sum += static_cast<double>(set.at(j).length) * products[j - 1];
  const auto& rec = set.at(k);
  const double tilde = static_cast<double>(rec.length) * products[k - 1];
  return sum + static_cast<double>(x - rec.lo()) / static_cast<double>(rec.length) * tilde;
}

double pnt_interval_estimate(std::size_t k, const PrimeTable& table) {
  require_k(k);
  return interval_length(k, table) / log_square(table.p(k + 1));
}

double upper_interval_estimate(std::size_t k, const PrimeTable& table) {
  require_k(k);
  return interval_length(k, table) / log_square(table.p(k));
}

std::vector<double> delta_normalizer_series(std::size_t k_max, const PrimeTable& table) {
  std::vector<double> out(k_max);
  double acc = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    acc += 0.5 * (upper_interval_estimate(k, table) - pnt_interval_estimate(k, table));
    out[k - 1] = acc;
  }
  return out;
}

double delta_normalizer(std::size_t k, const PrimeTable& table) {
  require_k(k);
  return delta_normalizer_series(k, table).back();
}

double eta(std::size_t k, const PrimeTable& table) {
  require_k(k);
  return log_square(table.p(k + 1)) / log_square(table.p(k)) - 1.0;
}

double eta_bound(std::size_t k, const PrimeTable& table) {
  require_k(k);
  return std::log(4.0) / log_square(table.p(k));
}

EstimatorBundle estimator_bundle(std::size_t k, const PrimeTable& table) {
  EstimatorBundle b;
  b.k = k;
  b.tilde_pi_k = expected_pi_k(k, table);
  b.tilde_pi_k_asym = expected_pi_k_asymptotic(k, table);
  b.pnt_estimate = pnt_interval_estimate(k, table);
  b.eta_bound = eta_bound(k, table);
  return b;
}

}  // namespace sievelab
