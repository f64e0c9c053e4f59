#pragma once

// Empirical analyses over interval data: Maier-window scans, moving averages,
// histograms with moment fits, lag correlations of pi_k - li_k, the bias
// curves and a small least-squares toolkit.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sievelab/intervals.hpp"
#include "sievelab/sieve.hpp"

namespace sievelab {

struct ScanSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::map<std::string, std::string> metadata;

  // Throws DomainError unless x is strictly increasing and all values finite.
  void validate() const;
};

struct GaussianFit {
  double mean = 0;
  double stdev = 0;  // unbiased (n - 1) sample standard deviation
  std::size_t sample_count = 0;
};

GaussianFit gaussian_fit(std::span<const double> samples);

// Phi(x) = (log x)^lambda.
double maier_phi(double x, double lambda);

struct MaierScan {
  std::size_t k = 0;
  double lambda = 0;
  u64 step = 0;
  double phi_lo = 0;  // Phi(p_k^2)
  double phi_hi = 0;  // Phi(p_{k+1}^2)
  ScanSeries ratios;  // x -> [pi(x + Phi(x)) - pi(x)] / (log x)^(lambda - 1)
  std::vector<u64> counts;  // pi(floor(x + Phi(x))) - pi(x) behind each ratio
  double whole_interval_ratio = 0;  // pi_k / (l_k / log p_{k+1}^2)
  double min_ratio = 0;
  double max_ratio = 0;
  double max_abs_deviation = 0;  // max |ratio - 1|
  // Largest d such that the scan reaches both 1 + d and 1 - d:
  // min(max - 1, 1 - min).
  double two_sided_deviation = 0;
};

// x runs over p_k^2, p_k^2 + step, ... while x + Phi(x) < p_{k+1}^2.
// step = 0 picks ceil(Phi(p_k^2) / 100). Domain error when Phi(p_k^2) >= l_k.
MaierScan maier_scan(std::size_t k, double lambda, u64 step, const PrimeTable& table,
                     const SieveConfig& config = {});

// delta_lambda as the smallest two-sided deviation over the scans.
double delta_lambda(std::span<const MaierScan> scans);

// For each gap size g met by consecutive primes with p_{k+1}^2 <= x_max,
// the point (g, x_g) where x_g is the largest root of
// (log x)^lambda = 2 sqrt(x) g - g^2; beyond x_g every interval with gap g is
// longer than Phi(x).
ScanSeries phi_vs_lengths(u64 x_max, double lambda, const PrimeTable& table);

// l_g(x) = 2 sqrt(x) g - g^2.
double gap_class_length(double x, double g);

// Centered simple moving average; near the ends the window is cut to the
// elements that exist.
std::vector<double> moving_average(std::span<const double> series, std::size_t run);

struct EmpiricalPdf {
  ScanSeries histogram;  // (bin_center, density), density integrates to 1
  GaussianFit fit;
  double bin_width = 0;
};

EmpiricalPdf empirical_pdf(std::span<const double> samples, std::size_t bins);

// Same for values with integer multiplicities (e.g. a count histogram).
EmpiricalPdf empirical_pdf_weighted(std::span<const double> values,
                                    std::span<const double> weights, std::size_t bins);

// corr(j) = sum_{i < n-j} d_i d_{i+j} / sum_{i < n-j} d_i^2, uncentred; the
// denominator uses the leading index only, so corr(0) = 1.
ScanSeries lag_correlation(std::span<const double> deviations, std::size_t max_lag);

// corr(lag) within each non-overlapping block of `block` values;
// x = 1-based block index. A trailing partial block is dropped.
ScanSeries block_lag_correlation(std::span<const double> deviations, std::size_t lag,
                                 std::size_t block);

struct BiasRow {
  std::size_t k = 0;
  u64 x = 0;  // p_{k+1}^2
  double a = 0;  // pi(x) - li(x)
  double b = 0;  // sum_{j<=k} (l_j / log p_j^2 - li_j)
  double c = 0;  // sum_{j<=k} (l_j / log p_{j+1}^2 - li_j)
  double delta = 0;  // Delta_k
  double a_norm = 0;
  double b_norm = 0;
  double c_norm = 0;
};

struct BiasSeries {
  std::vector<BiasRow> rows;
  GaussianFit a_norm_fit;  // over all rows
};

BiasSeries bias_series(const IntervalSet& set, const PrimeTable& table);

struct PolynomialFit {
  std::vector<double> coefficients;  // ascending powers of x
  double r_squared = 0;

  double operator()(double x) const;
};

PolynomialFit polynomial_fit(std::span<const double> xs, std::span<const double> ys,
                             std::size_t degree);

// Slope of the least-squares line through (log x, log y).
double power_law_exponent(std::span<const double> xs, std::span<const double> ys);

}  // namespace sievelab
