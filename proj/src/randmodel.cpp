#include "sievelab/randmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include "sievelab/analytic.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/residue.hpp"

namespace sievelab {

namespace {

using u128 = unsigned __int128;

void require_k(std::size_t k, const PrimeTable& table) {
  if (k == 0) throw DomainError("k must be >= 1");
  if (k + 1 > table.size())
    throw DomainError(fmt::format("k = {} needs {} primes, table has {}", k, k + 1, table.size()));
}

u64 interval_length(std::size_t k, const PrimeTable& table) {
  return checked_square(table.p(k + 1)) - checked_square(table.p(k));
}

double rescale_factor() { return std::exp(kEulerGamma) / 2.0; }

struct Accumulator {
  u128 sum = 0;
  u128 sum_squares = 0;
  u64 min_count = std::numeric_limits<u64>::max();
  u64 max_count = 0;
  std::vector<u64> histogram;

  explicit Accumulator(u64 length) : histogram(length + 1, 0) {}

  void add(u64 c) {
    sum += c;
    sum_squares += static_cast<u128>(c) * c;
    min_count = std::min(min_count, c);
    max_count = std::max(max_count, c);
    ++histogram[c];
  }

  void merge(const Accumulator& other) {
    sum += other.sum;
    sum_squares += other.sum_squares;
    min_count = std::min(min_count, other.min_count);
    max_count = std::max(max_count, other.max_count);
    for (std::size_t c = 0; c < histogram.size(); ++c) histogram[c] += other.histogram[c];
  }
};

boost::multiprecision::cpp_int big(u128 v) {
  boost::multiprecision::cpp_int out = static_cast<u64>(v >> 64);
  out <<= 64;
  out += static_cast<u64>(v);
  return out;
}

// Bounded uniform draw by rejection so the mapping from generator output to
// residues is fixed by this code, not by the standard library.
u64 uniform_below(std::mt19937_64& gen, u64 n) {
  const u64 limit = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % n;
  u64 draw;
  do draw = gen();
  while (draw >= limit);
  return draw % n;
}

void finish(ShiftModelSummary& out, const Accumulator& acc) {
  const u64 n = out.samples;
  out.sum = acc.sum;
  out.sum_squares = acc.sum_squares;
  out.min_count = acc.min_count;
  out.max_count = acc.max_count;
  out.histogram = acc.histogram;
  constexpr u128 exact = u128{1} << 53;
  if (acc.sum < exact && n < exact)
    out.mean = static_cast<double>(static_cast<u64>(acc.sum)) / static_cast<double>(n);
  else
    out.mean = static_cast<double>(static_cast<long double>(acc.sum) / static_cast<long double>(n));

  // n * sum_sq - sum^2, exact.
  using boost::multiprecision::cpp_int;
  const cpp_int numerator = cpp_int(n) * big(acc.sum_squares) - big(acc.sum) * big(acc.sum);
  const cpp_int denominator = out.mode == SampleMode::exhaustive
                                  ? cpp_int(n) * cpp_int(n)
                                  : cpp_int(n) * cpp_int(n > 1 ? n - 1 : 1);
  out.variance = n > 1 || out.mode == SampleMode::exhaustive
                     ? static_cast<double>(static_cast<long double>(numerator) /
                                           static_cast<long double>(denominator))
                     : 0.0;
  const double c = rescale_factor();
  out.rescaled_mean = c * out.mean;
  out.rescaled_variance = c * c * out.variance;
}

ShiftModelSummary exhaustive_model(std::size_t k, u64 period, const PrimeTable& table,
                                   unsigned threads) {
  const auto primes = table.first(k);
  const u64 length = interval_length(k, table);

  std::vector<u64> coprime((period + 63) / 64, ~u64{0});
  for (u64 p : primes)
    for (u64 m = 0; m < period; m += p) coprime[m >> 6] &= ~(u64{1} << (m & 63));
  auto bit = [&](u64 r) -> u64 { return (coprime[r >> 6] >> (r & 63)) & 1; };

  u64 totient = 1;
  for (u64 p : primes) totient *= p - 1;
  const u64 full = length / period;
  const u64 rem = length % period;
  const u64 start = checked_square(table.p(k)) % period;

  const std::size_t workers = std::max<std::size_t>(1, std::min<u64>(threads, period));
  std::vector<Accumulator> partial(workers, Accumulator(length));
  parallel_blocks(period, static_cast<unsigned>(workers),
                  [&](std::size_t begin, std::size_t end, std::size_t w) {
                    Accumulator& acc = partial[w];
                    // Window for shift j covers residues start + j .. start + j + rem - 1 (mod period).
                    u64 lead = (start + begin) % period;
                    u64 tail = (lead + rem) % period;
                    u64 window = 0;
                    for (u64 i = 0, r = lead; i < rem; ++i, r = r + 1 == period ? 0 : r + 1)
                      window += bit(r);
                    for (std::size_t j = begin; j < end; ++j) {
                      acc.add(full * totient + window);
                      window = window - bit(lead) + bit(tail);
                      lead = lead + 1 == period ? 0 : lead + 1;
                      tail = tail + 1 == period ? 0 : tail + 1;
                    }
                  });
  Accumulator total(length);
  for (const auto& a : partial) total.merge(a);

  ShiftModelSummary out;
  out.k = k;
  out.mode = SampleMode::exhaustive;
  out.samples = period;
  out.length = length;
  finish(out, total);
  return out;
}

}  // namespace

std::string_view to_string(SampleMode mode) {
  return mode == SampleMode::exhaustive ? "exhaustive" : "sampled";
}

std::vector<u64> sample_shift_residues(std::size_t k, u64 seed, u64 index,
                                       const PrimeTable& table) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  std::vector<u64> residues(k);
  const auto primes = table.first(k);
  for (std::size_t i = 0; i < k; ++i) residues[i] = uniform_below(gen, primes[i]);
  return residues;
}

u64 shifted_count_from_residues(std::size_t k, std::span<const u64> residues,
                                const PrimeTable& table, std::vector<std::uint8_t>& scratch) {
  require_k(k, table);
  if (residues.size() != k) throw DomainError("one residue per prime required");
  const u64 length = interval_length(k, table);
  const u64 base = checked_square(table.p(k));
  scratch.assign(length, 0);
  const auto primes = table.first(k);
  for (std::size_t i = 0; i < k; ++i) {
    const u64 p = primes[i];
    const u64 r = (base % p + residues[i] % p) % p;
    for (u64 t = (p - r) % p; t < length; t += p) scratch[t] = 1;
  }
  return static_cast<u64>(std::count(scratch.begin(), scratch.end(), std::uint8_t{0}));
}

ShiftModelSummary shift_model(std::size_t k, const PrimeTable& table,
                              const ShiftModelOptions& options) {
  require_k(k, table);
  if (options.budget == 0) throw DomainError("budget must be >= 1");
  const auto period = primorial_u64(k, table);
  if (period && *period <= options.budget) return exhaustive_model(k, *period, table, options.threads);

  const u64 length = interval_length(k, table);
  const u64 n = options.budget;
  const std::size_t workers = std::max<std::size_t>(1, std::min<u64>(options.threads, n));
  std::vector<Accumulator> partial(workers, Accumulator(length));
  parallel_blocks(n, static_cast<unsigned>(workers),
                  [&](std::size_t begin, std::size_t end, std::size_t w) {
                    std::vector<std::uint8_t> scratch;
                    for (std::size_t i = begin; i < end; ++i) {
                      const auto res = sample_shift_residues(k, options.seed, i, table);
                      partial[w].add(shifted_count_from_residues(k, res, table, scratch));
                    }
                  });
  Accumulator total(length);
  for (const auto& a : partial) total.merge(a);

  ShiftModelSummary out;
  out.k = k;
  out.mode = SampleMode::sampled;
  out.samples = n;
  out.length = length;
  out.seed = options.seed;
  finish(out, total);
  return out;
}

ReferenceDistribution binomial_reference(std::size_t k, const PrimeTable& table) {
  require_k(k, table);
  ReferenceDistribution r;
  r.kind = ReferenceKind::binomial;
  r.trials = interval_length(k, table);
  r.success_p = 1.0 / (2.0 * std::log(static_cast<double>(table.p(k + 1))));
  r.mean = static_cast<double>(r.trials) * r.success_p;
  r.variance = r.mean * (1.0 - r.success_p);
  return r;
}

ReferenceDistribution poisson_reference(std::size_t k, const PrimeTable& table) {
  require_k(k, table);
  ReferenceDistribution r;
  r.kind = ReferenceKind::poisson;
  r.success_p = 1.0 / (2.0 * std::log(static_cast<double>(table.p(k + 1))));
  r.mean = static_cast<double>(interval_length(k, table)) * r.success_p;
  r.variance = r.mean;
  return r;
}

double binomial_sigma(std::size_t k, u64 n, const PrimeTable& table) {
  const auto ref = binomial_reference(k, table);
  if (n > ref.trials)
    throw DomainError(fmt::format("n = {} exceeds l_{} = {}", n, k, ref.trials));
  return std::sqrt(static_cast<double>(n) * ref.success_p * (1.0 - ref.success_p));
}

double binomial_pmf(u64 trials, double p, u64 n) {
  if (n > trials) return 0.0;
  if (p <= 0.0) return n == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return n == trials ? 1.0 : 0.0;
  const double t = static_cast<double>(trials);
  const double x = static_cast<double>(n);
  return std::exp(std::lgamma(t + 1) - std::lgamma(x + 1) - std::lgamma(t - x + 1) +
                  x * std::log(p) + (t - x) * std::log1p(-p));
}

std::vector<VarianceRow> variance_comparison(std::span<const std::size_t> ks,
                                             const PrimeTable& table,
                                             const ShiftModelOptions& options) {
  std::vector<VarianceRow> rows;
  rows.reserve(ks.size());
  const double c2 = rescale_factor() * rescale_factor();
  for (std::size_t k : ks) {
    const auto model = shift_model(k, table, options);
    const auto binom = binomial_reference(k, table);
    VarianceRow row;
    row.k = k;
    row.mode = model.mode;
    row.model_stdev = std::sqrt(model.rescaled_variance);
    row.binomial_stdev = std::sqrt(binom.variance);
    const double gap = binom.variance - model.rescaled_variance;
    if (model.mode == SampleMode::sampled && model.samples > 3) {
      // Var(s^2) ~ (m4 - m2^2 (n-3)/(n-1)) / n from the sample's central moments.
      const double n = static_cast<double>(model.samples);
      long double m2 = 0, m4 = 0;
      for (std::size_t v = 0; v < model.histogram.size(); ++v) {
        if (model.histogram[v] == 0) continue;
        const long double d = static_cast<long double>(v) - model.mean;
        m2 += model.histogram[v] * d * d;
        m4 += model.histogram[v] * d * d * d * d;
      }
      m2 /= n;
      m4 /= n;
      const double var_of_var =
          std::max(0.0, static_cast<double>((m4 - m2 * m2 * (n - 3) / (n - 1)) / n));
      row.variance_stderr = c2 * std::sqrt(var_of_var);
    }
    if (row.variance_stderr > 0)
      row.margin_sigmas = gap / row.variance_stderr;
    else
      row.margin_sigmas = gap > 0 ? std::numeric_limits<double>::infinity()
                                  : (gap < 0 ? -std::numeric_limits<double>::infinity() : 0.0);
    row.violated = !(gap > 0);
    row.significant = row.margin_sigmas >= 3.0;
    rows.push_back(row);
  }
  return rows;
}

SumModelBounds sum_model_bounds(u64 x, const IntervalSet& set, const PrimeTable& table,
                                bool count_offset) {
  const std::size_t k = locate_interval(x, set);
  long double mu = 0;
  for (std::size_t j = 1; j < k; ++j) mu += set.at(j).pnt_estimate;
  const auto& rec = set.at(k);
  mu += static_cast<long double>(x - rec.lo()) / rec.length * pnt_interval_estimate(k, table);
  SumModelBounds out;
  // Poisson variance equals its mean, term by term.
  out.sigma_bound = std::sqrt(static_cast<double>(mu));
  out.mu = static_cast<double>(mu) + (count_offset ? 2.0 : 0.0);
  return out;
}

ConjectureScan conjecture_check(const IntervalSet& set) {
  ConjectureScan scan;
  scan.rows.reserve(set.k_max());
  long double li_x = li<double>(4.0);
  for (const auto& rec : set.records()) {
    li_x += rec.li_k;
    ConjectureRow row;
    row.k = rec.k;
    row.x = checked_square(rec.p_next);
    row.pi_minus_li = static_cast<double>(static_cast<long double>(set.pi_upto_end(rec.k)) - li_x);
    row.sqrt_li = static_cast<double>(std::sqrt(li_x));
    if (!(std::fabs(row.pi_minus_li) < row.sqrt_li)) scan.violations.push_back(rec.k);
    scan.rows.push_back(row);
  }
  return scan;
}

}  // namespace sievelab
