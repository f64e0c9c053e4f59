#pragma once

// Closed-form and quadrature quantities over the intervals s_k: the offset
// logarithmic integral, Mertens products with their explicit error bound, the
// probabilistic estimators and the bias normalizer.

#include <cmath>
#include <cstddef>
#include <vector>

#include "sievelab/errors.hpp"
#include "sievelab/quadrature.hpp"
#include "sievelab/sieve.hpp"

namespace sievelab {

class IntervalSet;

// Euler-Mascheroni constant to 16 significant digits.
inline constexpr double kEulerGamma = 0.5772156649015329;

// Integral of 1/log t over [a, b] with a >= 2, split at integer powers of ten.
template <class Real>
Real log_integral_between(Real a, Real b,
                          const QuadratureOptions<Real>& options = {}) {
  using std::log;
  if (a < Real(2) || b < a) throw DomainError("log integral needs 2 <= a <= b");
  auto inv_log = [](const Real& t) -> Real { return Real(1) / log(t); };
  Real total(0);
  Real lo = a;
  Real decade(10);
  while (decade <= lo) decade *= 10;
  while (lo < b) {
    const Real hi = decade < b ? decade : b;
    total += integrate<Real>(inv_log, lo, hi, options).value;
    lo = hi;
    decade *= 10;
  }
  return total;
}

// Offset logarithmic integral li(x) = integral_2^x dt / log t, so li(2) = 0.
template <class Real>
Real li(Real x, const QuadratureOptions<Real>& options = {}) {
  if (x < Real(2)) throw DomainError("li(x) is defined here for x >= 2 only");
  return log_integral_between<Real>(Real(2), x, options);
}

// li over s_k: li(p_{k+1}^2) - li(p_k^2), integrated directly over the interval.
double li_k(std::size_t k, const PrimeTable& table);

struct MertensEvaluation {
  std::size_t k = 0;
  double product = 0;        // prod_{p <= p_k} (1 - 1/p)
  double gamma = kEulerGamma;
  double x = 0;              // p_{k+1}^2 - 1, the point the bound is taken at
  double delta_bound = 0;    // bound on |delta| in prod = 2 e^{-gamma + delta} / log x
  double delta = 0;          // log(prod * log(x) / 2) + gamma
};

// Products for k = 1..k_max, element k-1 holding prod over the first k primes.
// Ordered long double multiplication up to k = 1000, compensated summation of
// log(1 - 1/p) beyond.
std::vector<double> mertens_products(std::size_t k_max, const PrimeTable& table);

MertensEvaluation mertens_product(std::size_t k, const PrimeTable& table);

// |delta| bound at x: 4/log(sqrt x + 1) + 2/(sqrt x log sqrt x) + 1/(2 sqrt x).
double mertens_delta_bound(double x);

// x * prod_{p <= sqrt x} (1 - 1/p); x >= 4.
double naive_expected_pi(u64 x, const PrimeTable& table);

// l_k * prod_{p <= p_k} (1 - 1/p).
double expected_pi_k(std::size_t k, const PrimeTable& table);

// 2 e^{-gamma} l_k / log p_{k+1}^2.
double expected_pi_k_asymptotic(std::size_t k, const PrimeTable& table);

// sum_{j<k} expected_pi_j + (x - p_k^2)/l_k * expected_pi_k with p_k^2 <= x < p_{k+1}^2.
// count_offset adds the two primes 2 and 3 that precede s_1.
double expected_pi_upto(u64 x, const IntervalSet& set, const PrimeTable& table,
                        bool count_offset = false);

// l_k / log p_{k+1}^2.
double pnt_interval_estimate(std::size_t k, const PrimeTable& table);

// l_k / log p_k^2, the upper end of the li_k sandwich.
double upper_interval_estimate(std::size_t k, const PrimeTable& table);

// Delta_k = 1/2 sum_{j<=k} (l_j/log p_j^2 - l_j/log p_{j+1}^2).
double delta_normalizer(std::size_t k, const PrimeTable& table);
std::vector<double> delta_normalizer_series(std::size_t k_max, const PrimeTable& table);

// eta_k = log p_{k+1}^2 / log p_k^2 - 1 and its Bertrand bound log 4 / log p_k^2.
double eta(std::size_t k, const PrimeTable& table);
double eta_bound(std::size_t k, const PrimeTable& table);

struct EstimatorBundle {
  std::size_t k = 0;
  double tilde_pi_k = 0;
  double tilde_pi_k_asym = 0;
  double pnt_estimate = 0;
  double eta_bound = 0;
};

EstimatorBundle estimator_bundle(std::size_t k, const PrimeTable& table);

}  // namespace sievelab
