#include "sievelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "sievelab/analytic.hpp"
#include "sievelab/errors.hpp"

namespace sievelab {

void ScanSeries::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, y] = points[i];
    if (!std::isfinite(x) || !std::isfinite(y))
      throw DomainError(fmt::format("series '{}' has a non-finite point at {}", label, i));
    if (i > 0 && !(points[i - 1].first < x))
      throw DomainError(fmt::format("series '{}' x not strictly increasing at {}", label, i));
  }
}

GaussianFit gaussian_fit(std::span<const double> samples) {
  GaussianFit fit;
  fit.sample_count = samples.size();
  if (samples.empty()) return fit;
  long double sum = 0;
  for (double v : samples) sum += v;
  const long double mean = sum / samples.size();
  fit.mean = static_cast<double>(mean);
  if (samples.size() < 2) return fit;
  long double ss = 0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  fit.stdev = static_cast<double>(std::sqrt(ss / (samples.size() - 1)));
  return fit;
}

double maier_phi(double x, double lambda) { return std::pow(std::log(x), lambda); }

MaierScan maier_scan(std::size_t k, double lambda, u64 step, const PrimeTable& table,
                     const SieveConfig& config) {
  if (k == 0) throw DomainError("interval index k must be >= 1");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  const u64 lo = checked_square(table.p(k));
  const u64 end = checked_square(table.p(k + 1));
  const u64 length = end - lo;
  MaierScan scan;
  scan.k = k;
  scan.lambda = lambda;
  scan.phi_lo = maier_phi(static_cast<double>(lo), lambda);
  scan.phi_hi = maier_phi(static_cast<double>(end), lambda);
  if (scan.phi_lo >= static_cast<double>(length))
    throw DomainError(fmt::format("Phi(p_{}^2) = {:.1f} does not fit in l_{} = {}", k,
                                  scan.phi_lo, k, length));
  scan.step = step != 0 ? step : static_cast<u64>(std::ceil(scan.phi_lo / 100.0));
  scan.ratios.label = fmt::format("maier_k{}", k);
  scan.ratios.metadata["k"] = std::to_string(k);
  scan.ratios.metadata["lambda"] = fmt::format("{}", lambda);
  scan.ratios.metadata["step"] = std::to_string(scan.step);

  const auto primes = primes_in(lo, end - 1, table.first(k), config);
  auto pi_upto = [&](u64 v) {
    return static_cast<u64>(std::upper_bound(primes.begin(), primes.end(), v) - primes.begin());
  };
  scan.whole_interval_ratio = static_cast<double>(primes.size()) /
                              (static_cast<double>(length) / std::log(static_cast<double>(end)));

  scan.min_ratio = std::numeric_limits<double>::infinity();
  scan.max_ratio = -std::numeric_limits<double>::infinity();
  for (u64 x = lo; x < end; x += scan.step) {
    const double log_x = std::log(static_cast<double>(x));
    const double phi = std::pow(log_x, lambda);
    const double reach = static_cast<double>(x) + phi;
    if (reach >= static_cast<double>(end)) break;
    const u64 count = pi_upto(static_cast<u64>(std::floor(reach))) - pi_upto(x);
    const double ratio = static_cast<double>(count) / std::pow(log_x, lambda - 1.0);
    scan.counts.push_back(count);
    scan.ratios.points.emplace_back(static_cast<double>(x), ratio);
    scan.min_ratio = std::min(scan.min_ratio, ratio);
    scan.max_ratio = std::max(scan.max_ratio, ratio);
  }
  if (scan.counts.empty()) throw DomainError(fmt::format("no admissible x in s_{}", k));
  scan.max_abs_deviation = std::max(scan.max_ratio - 1.0, 1.0 - scan.min_ratio);
  scan.two_sided_deviation = std::min(scan.max_ratio - 1.0, 1.0 - scan.min_ratio);
  return scan;
}

double delta_lambda(std::span<const MaierScan> scans) {
  if (scans.empty()) throw DomainError("delta_lambda needs at least one scan");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : scans) best = std::min(best, s.two_sided_deviation);
  return best;
}

double gap_class_length(double x, double g) { return 2.0 * std::sqrt(x) * g - g * g; }

ScanSeries phi_vs_lengths(u64 x_max, double lambda, const PrimeTable& table) {
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  std::set<u64> gaps;
  for (std::size_t k = 1; k < table.size(); ++k) {
    const u64 q = table.p(k + 1);
    if (checked_square(q) > x_max) break;
    gaps.insert(q - table.p(k));
  }
  if (table.size() < 2 || checked_square(table.p(table.size())) <= x_max)
    throw ResourceError(fmt::format("prime table too short for x_max = {}", x_max));

  ScanSeries out;
  out.label = "phi_vs_lengths";
  out.metadata["lambda"] = fmt::format("{}", lambda);
  out.metadata["x_max"] = std::to_string(x_max);
  // In u = log x: f(u) = 2 g e^(u/2) - g^2 - u^lambda. Walk down from a u where
  // the exponential has long won until f turns non-positive, then bisect.
  for (u64 g : gaps) {
    const double gd = static_cast<double>(g);
    auto f = [&](double u) { return 2.0 * gd * std::exp(u / 2.0) - gd * gd - std::pow(u, lambda); };
    const double u_floor = std::log(2.0);
    double u_hi = 700.0;
    double u_lo = u_hi;
    const double du = 0.01;
    while (u_lo > u_floor && f(u_lo) > 0) u_lo -= du;
    double root;
    if (u_lo <= u_floor) {
      root = 2.0;
    } else {
      u_hi = u_lo + du;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (u_lo + u_hi);
        (f(mid) > 0 ? u_hi : u_lo) = mid;
      }
      root = std::exp(u_hi);
    }
    out.points.emplace_back(gd, root);
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t run) {
  if (series.empty()) throw DomainError("moving average of an empty series");
  if (run == 0 || run > series.size())
    throw DomainError(fmt::format("run {} outside [1, {}]", run, series.size()));
  const std::size_t n = series.size();
  std::vector<long double> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + series[i];
  const std::size_t left = (run - 1) / 2;
  const std::size_t right = run / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i >= left ? i - left : 0;
    const std::size_t b = std::min(n - 1, i + right);
    out[i] = static_cast<double>((prefix[b + 1] - prefix[a]) / (b - a + 1));
  }
  return out;
}

EmpiricalPdf empirical_pdf_weighted(std::span<const double> values,
                                    std::span<const double> weights, std::size_t bins) {
  if (values.size() != weights.size()) throw DomainError("values and weights differ in size");
  if (bins == 0) throw DomainError("need at least one bin");
  long double total = 0, sum = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] < 0 || !std::isfinite(values[i]))
      throw DomainError("weights must be non-negative and values finite");
    if (weights[i] == 0) continue;
    total += weights[i];
    sum += weights[i] * static_cast<long double>(values[i]);
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  if (total < 2) throw DomainError("empirical pdf needs at least two samples");

  EmpiricalPdf pdf;
  const long double mean = sum / total;
  long double ss = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    ss += weights[i] * (values[i] - mean) * (values[i] - mean);
  pdf.fit.mean = static_cast<double>(mean);
  pdf.fit.stdev = static_cast<double>(std::sqrt(ss / (total - 1)));
  pdf.fit.sample_count = static_cast<std::size_t>(total);
  pdf.histogram.label = "pdf";

  if (lo == hi) {
    pdf.fit.stdev = 0;
    pdf.bin_width = 1.0;
    pdf.histogram.points.emplace_back(lo, 1.0);
    return pdf;
  }
  pdf.bin_width = (hi - lo) / static_cast<double>(bins);
  std::vector<long double> mass(bins, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] == 0) continue;
    auto b = static_cast<std::size_t>((values[i] - lo) / pdf.bin_width);
    mass[std::min(b, bins - 1)] += weights[i];
  }
  for (std::size_t b = 0; b < bins; ++b)
    pdf.histogram.points.emplace_back(lo + (static_cast<double>(b) + 0.5) * pdf.bin_width,
                                      static_cast<double>(mass[b] / (total * pdf.bin_width)));
  return pdf;
}

EmpiricalPdf empirical_pdf(std::span<const double> samples, std::size_t bins) {
  const std::vector<double> ones(samples.size(), 1.0);
  return empirical_pdf_weighted(samples, ones, bins);
}

namespace {

double lag_corr(std::span<const double> d, std::size_t lag) {
  if (lag == 0) return 1.0;
  long double num = 0, den = 0;
  for (std::size_t i = 0; i + lag < d.size(); ++i) {
    num += static_cast<long double>(d[i]) * d[i + lag];
    den += static_cast<long double>(d[i]) * d[i];
  }
  return den > 0 ? static_cast<double>(num / den) : 0.0;
}

}  // namespace

ScanSeries lag_correlation(std::span<const double> deviations, std::size_t max_lag) {
  if (deviations.size() <= max_lag)
    throw DomainError(fmt::format("{} values cannot support lag {}", deviations.size(), max_lag));
  ScanSeries out;
  out.label = "lag_correlation";
  out.metadata["estimator"] = "uncentred, leading-index denominator";
  for (std::size_t j = 0; j <= max_lag; ++j)
    out.points.emplace_back(static_cast<double>(j), lag_corr(deviations, j));
  return out;
}

ScanSeries block_lag_correlation(std::span<const double> deviations, std::size_t lag,
                                 std::size_t block) {
  if (block == 0 || block <= lag)
    throw DomainError(fmt::format("block {} must exceed lag {}", block, lag));
  ScanSeries out;
  out.label = fmt::format("block_lag_correlation_lag{}", lag);
  out.metadata["estimator"] = "uncentred, leading-index denominator";
  out.metadata["block"] = std::to_string(block);
  for (std::size_t b = 0; (b + 1) * block <= deviations.size(); ++b)
    out.points.emplace_back(static_cast<double>(b + 1),
                            lag_corr(deviations.subspan(b * block, block), lag));
  return out;
}

BiasSeries bias_series(const IntervalSet& set, const PrimeTable& table) {
  BiasSeries out;
  const std::size_t n = set.k_max();
  if (n == 0) return out;
  const auto delta = delta_normalizer_series(n, table);
  long double li_x = li<double>(4.0);
  long double b = 0, c = 0;
  std::vector<double> a_norm(n);
  out.rows.reserve(n);
  for (const auto& rec : set.records()) {
    const long double len = static_cast<long double>(rec.length);
    li_x += rec.li_k;
    b += len / (2.0L * std::log(static_cast<long double>(rec.p_k))) - rec.li_k;
    c += len / (2.0L * std::log(static_cast<long double>(rec.p_next))) - rec.li_k;
    BiasRow row;
    row.k = rec.k;
    row.x = checked_square(rec.p_next);
    row.a = static_cast<double>(static_cast<long double>(set.pi_upto_end(rec.k)) - li_x);
    row.b = static_cast<double>(b);
    row.c = static_cast<double>(c);
    row.delta = delta[rec.k - 1];
    row.a_norm = row.a / row.delta;
    row.b_norm = row.b / row.delta;
    row.c_norm = row.c / row.delta;
    a_norm[rec.k - 1] = row.a_norm;
    out.rows.push_back(row);
  }
  out.a_norm_fit = gaussian_fit(a_norm);
  return out;
}

double PolynomialFit::operator()(double x) const {
  double v = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * x + *it;
  return v;
}

PolynomialFit polynomial_fit(std::span<const double> xs, std::span<const double> ys,
                             std::size_t degree) {
  if (xs.size() != ys.size()) throw DomainError("x and y differ in size");
  if (xs.size() <= degree) throw DomainError("not enough points for the requested degree");
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto m = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd vander(n, m);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double power = 1;
    for (Eigen::Index j = 0; j < m; ++j, power *= xs[i]) vander(i, j) = power;
    y(i) = ys[i];
  }
  const Eigen::VectorXd coef = vander.colPivHouseholderQr().solve(y);
  PolynomialFit fit;
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());
  const double ss_res = (vander * coef - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double power_law_exponent(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("need two or more points");
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0)) throw DomainError("power law needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  return polynomial_fit(lx, ly, 1).coefficients[1];
}

}  // namespace sievelab
