#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <new>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "checkpoint.hpp"
#include "manifest.hpp"
#include "sievelab/analytic.hpp"
#include "sievelab/csv.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/intervals.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/residue.hpp"

namespace sievelab::cli {

namespace fs = std::filesystem;

namespace {

void progress(const RunContext& ctx, const std::string& line) {
  if (!ctx.quiet) std::cerr << line << '\n';
}

void prepare_out_dir(const RunContext& ctx) {
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", ctx.out_dir.string(), ec.message()));
}

std::string out_file(const RunContext& ctx, const std::string& name) {
  return (ctx.out_dir / name).string();
}

PrimeTable table_for(std::size_t k_max, const RunContext& ctx) {
  return build_prime_table_for_count(k_max + 1, ctx.sieve);
}

void write_manifest(const RunContext& ctx, const std::string& command, std::optional<u64> seed,
                    std::size_t k_max, const std::vector<std::string>& outputs,
                    std::map<std::string, std::string> notes = {}) {
  RunManifest m;
  m.command = command;
  m.argv = ctx.argv;
  m.seed = seed;
  m.k_max = k_max;
  m.notes = std::move(notes);
  m.write(ctx.out_dir, outputs);
}

IntervalSet interval_set(std::size_t k_max, const PrimeTable& table, const RunContext& ctx) {
  progress(ctx, fmt::format("sieving s_1..s_{}", k_max));
  return build_intervals(k_max, table, ctx.sieve);
}

}  // namespace

bool cmd_intervals(const RunContext& ctx, const IntervalsOptions& opts) {
  if (opts.k_max == 0) throw DomainError("K_max must be >= 1");
  if (opts.chunk == 0) throw DomainError("chunk must be >= 1");
  prepare_out_dir(ctx);
  const auto table = table_for(opts.k_max, ctx);

  std::vector<u64> pi(opts.k_max, 0);
  std::size_t next = 1;
  if (opts.checkpoint) {
    auto rows = load_checkpoint(*opts.checkpoint);
    for (const auto& r : rows) {
      if (r.k > opts.k_max) break;
      if (table.p(r.k) != r.p_k)
        throw IoError(fmt::format("checkpoint row k = {} has p_k = {}, expected {}", r.k, r.p_k,
                                  table.p(r.k)));
      pi[r.k - 1] = r.pi_k;
      next = r.k + 1;
    }
    if (next > 1) progress(ctx, fmt::format("resuming at k = {}", next));
    std::size_t chunks = 0;
    while (next <= opts.k_max && (opts.max_chunks == 0 || chunks < opts.max_chunks)) {
      const std::size_t last = std::min(opts.k_max, next + opts.chunk - 1);
      const auto recs = build_interval_records(next, last, table, ctx.sieve);
      std::vector<CheckpointRow> rows_out;
      rows_out.reserve(recs.size());
      for (const auto& r : recs) {
        pi[r.k - 1] = r.pi_k;
        rows_out.push_back({r.k, r.p_k, r.pi_k});
      }
      append_checkpoint(*opts.checkpoint, rows_out);
      progress(ctx, fmt::format("intervals {}..{} checkpointed", next, last));
      next = last + 1;
      ++chunks;
    }
    if (next <= opts.k_max) {
      progress(ctx, fmt::format("stopped before k = {}; rerun with the same checkpoint to resume",
                                next));
      return false;
    }
  } else {
    const auto recs = build_interval_records(1, opts.k_max, table, ctx.sieve);
    for (const auto& r : recs) pi[r.k - 1] = r.pi_k;
  }

  // Every derived column comes from (k, pi_k) alone, so a resumed run and a
  // single-shot run produce the same bytes.
  std::vector<IntervalRecord> recs(opts.k_max);
  parallel_strided(opts.k_max, ctx.sieve.threads, [&](std::size_t i, std::size_t) {
    recs[i] = make_interval_record(i + 1, pi[i], table);
  });

  CsvWriter iv(out_file(ctx, "intervals.csv"),
               {"k", "p_k", "p_next", "gap", "length", "pi_k", "li_k", "pnt_estimate"});
  CsvWriter dev(out_file(ctx, "deviations.csv"), {"k", "x", "pi_k_minus_li_k"});
  for (const auto& r : recs) {
    iv.cell(u64{r.k}).cell(r.p_k).cell(r.p_next).cell(r.gap).cell(r.length).cell(r.pi_k)
        .cell(r.li_k).cell(r.pnt_estimate);
    iv.end_row();
    dev.cell(u64{r.k}).cell(checked_square(r.p_next))
        .cell(static_cast<double>(r.pi_k) - r.li_k);
    dev.end_row();
  }
  iv.close();
  dev.close();
  write_manifest(ctx, "intervals", std::nullopt, opts.k_max, {"intervals.csv", "deviations.csv"});
  return true;
}

double cmd_maier(const RunContext& ctx, const MaierOptions& opts) {
  if (opts.ks.empty()) throw DomainError("maier needs at least one k");
  prepare_out_dir(ctx);
  const std::size_t k_top = *std::max_element(opts.ks.begin(), opts.ks.end());
  const auto table = table_for(k_top, ctx);
  std::vector<MaierScan> scans;
  std::vector<std::string> outputs;
  for (std::size_t k : opts.ks) {
    progress(ctx, fmt::format("maier scan s_{}", k));
    scans.push_back(maier_scan(k, opts.lambda, opts.step, table, ctx.sieve));
    const auto name = fmt::format("maier_k{}.csv", k);
    CsvWriter w(out_file(ctx, name), {"x", "ratio"});
    for (const auto& [x, ratio] : scans.back().ratios.points) {
      w.cell(static_cast<u64>(x)).cell(ratio);
      w.end_row();
    }
    w.close();
    outputs.push_back(name);
  }
  CsvWriter s(out_file(ctx, "maier_summary.csv"),
              {"k", "phi_lo", "phi_hi", "step", "points", "min_ratio", "max_ratio",
               "max_abs_deviation", "two_sided_deviation", "whole_interval_ratio",
               "in_band_fraction"});
  for (const auto& scan : scans) {
    std::size_t in_band = 0;
    for (const auto& pt : scan.ratios.points)
      if (std::fabs(pt.second - 1.0) <= opts.delta_band) ++in_band;
    s.cell(u64{scan.k}).cell(scan.phi_lo).cell(scan.phi_hi).cell(scan.step)
        .cell(u64{scan.ratios.points.size()}).cell(scan.min_ratio).cell(scan.max_ratio)
        .cell(scan.max_abs_deviation).cell(scan.two_sided_deviation)
        .cell(scan.whole_interval_ratio)
        .cell(static_cast<double>(in_band) / static_cast<double>(scan.ratios.points.size()));
    s.end_row();
  }
  s.close();
  outputs.push_back("maier_summary.csv");
  const double delta = delta_lambda(scans);
  std::cout << "delta_lambda " << format_real(delta) << '\n';
  write_manifest(ctx, "maier", std::nullopt, k_top, outputs,
                 {{"delta_lambda", format_real(delta)},
                  {"lambda", format_real(opts.lambda)},
                  {"delta_band", format_real(opts.delta_band)}});
  return delta;
}

void cmd_legendre(const RunContext& ctx, std::size_t k_min, std::size_t k_max) {
  if (k_min == 0 || k_max < k_min) throw DomainError("need 1 <= k_min <= k_max");
  prepare_out_dir(ctx);
  const auto table = table_for(k_max, ctx);
  struct Row {
    double full = 0, truncated = 0, pi_ratio = 0;
    u64 terms = 0, length = 0;
  };
  const std::size_t n = k_max - k_min + 1;
  std::vector<Row> rows(n);
  SieveConfig inner = ctx.sieve;
  inner.threads = 1;
  progress(ctx, fmt::format("truncated expansions for k = {}..{}", k_min, k_max));
  parallel_strided(n, ctx.sieve.threads, [&](std::size_t i, std::size_t) {
    const std::size_t k = k_min + i;
    const double pnt = pnt_interval_estimate(k, table);
    const auto trunc = truncated_euler_estimate(k, table);
    Row& r = rows[i];
    r.full = expected_pi_k(k, table) / pnt;
    r.truncated = trunc.estimate / pnt;
    r.pi_ratio = static_cast<double>(count_interval_primes(k, table, inner)) / pnt;
    r.terms = trunc.terms;
    r.length = checked_square(table.p(k + 1)) - checked_square(table.p(k));
  });
  CsvWriter lw(out_file(ctx, "legendre.csv"), {"k", "ratio_full", "ratio_truncated", "pi_ratio"});
  CsvWriter tw(out_file(ctx, "terms.csv"), {"k", "terms", "l_k"});
  for (std::size_t i = 0; i < n; ++i) {
    const u64 k = k_min + i;
    lw.cell(k).cell(rows[i].full).cell(rows[i].truncated).cell(rows[i].pi_ratio);
    lw.end_row();
    tw.cell(k).cell(rows[i].terms).cell(rows[i].length);
    tw.end_row();
  }
  lw.close();
  tw.close();
  write_manifest(ctx, "legendre", std::nullopt, k_max, {"legendre.csv", "terms.csv"});
}

ShiftModelSummary cmd_randmodel(const RunContext& ctx, std::size_t k, u64 budget, u64 seed,
                                std::size_t bins) {
  prepare_out_dir(ctx);
  const auto table = table_for(k, ctx);
  ShiftModelOptions mo;
  mo.budget = budget;
  mo.seed = seed;
  mo.threads = ctx.sieve.threads;
  progress(ctx, fmt::format("shift model for s_{}", k));
  const auto model = shift_model(k, table, mo);
  const auto binom = binomial_reference(k, table);
  const auto pois = poisson_reference(k, table);

  CsvWriter s(out_file(ctx, "model_summary.csv"),
              {"k", "mode", "samples", "mean", "variance", "binom_var", "pois_var", "seed"});
  s.cell(u64{k}).cell(to_string(model.mode)).cell(model.samples).cell(model.mean)
      .cell(model.variance).cell(binom.variance).cell(pois.variance)
      .cell(model.seed ? fmt::format("{}", *model.seed) : std::string());
  s.end_row();
  s.close();

  // Rescaled model values measured from li_k, weighted by how often each count occurs.
  const double c = std::exp(kEulerGamma) / 2.0;
  const double lik = li_k(k, table);
  std::vector<double> values, weights;
  for (std::size_t v = 0; v < model.histogram.size(); ++v) {
    if (model.histogram[v] == 0) continue;
    values.push_back(c * static_cast<double>(v) - lik);
    weights.push_back(static_cast<double>(model.histogram[v]));
  }
  const auto pdf = empirical_pdf_weighted(values, weights, bins);
  CsvWriter p(out_file(ctx, "model_pdf.csv"), {"bin_center", "density"});
  for (const auto& [x, d] : pdf.histogram.points) {
    p.cell(x).cell(d);
    p.end_row();
  }
  p.close();

  CsvWriter b(out_file(ctx, "binomial_pmf.csv"), {"n_minus_li_k", "probability"});
  for (u64 n = 0; n <= binom.trials; ++n) {
    const double pr = binomial_pmf(binom.trials, binom.success_p, n);
    if (pr < 1e-12) continue;
    b.cell(static_cast<double>(n) - lik).cell(pr);
    b.end_row();
  }
  b.close();
  write_manifest(ctx, "randmodel", model.seed, k,
                 {"model_summary.csv", "model_pdf.csv", "binomial_pmf.csv"},
                 {{"rescaled_mean", format_real(model.rescaled_mean)},
                  {"rescaled_variance", format_real(model.rescaled_variance)}});
  std::cout << fmt::format("mode {} samples {} mean {} variance {}\n", to_string(model.mode),
                           model.samples, format_real(model.mean), format_real(model.variance));
  return model;
}

std::vector<VarianceRow> cmd_variance(const RunContext& ctx, const std::vector<std::size_t>& ks,
                                      u64 budget, u64 seed) {
  if (ks.empty()) throw DomainError("variance needs at least one k");
  prepare_out_dir(ctx);
  const auto table = table_for(*std::max_element(ks.begin(), ks.end()), ctx);
  ShiftModelOptions mo;
  mo.budget = budget;
  mo.seed = seed;
  mo.threads = ctx.sieve.threads;
  progress(ctx, "variance comparison");
  const auto rows = variance_comparison(ks, table, mo);
  CsvWriter w(out_file(ctx, "variance.csv"),
              {"k", "mode", "model_stdev", "binomial_stdev", "variance_stderr", "margin_sigmas",
               "violated"});
  std::size_t violations = 0;
  for (const auto& r : rows) {
    w.cell(u64{r.k}).cell(to_string(r.mode)).cell(r.model_stdev).cell(r.binomial_stdev)
        .cell(r.variance_stderr).cell(r.margin_sigmas).cell(r.violated ? 1 : 0);
    w.end_row();
    violations += r.violated ? 1 : 0;
  }
  w.close();
  write_manifest(ctx, "variance", seed, *std::max_element(ks.begin(), ks.end()), {"variance.csv"},
                 {{"violations", std::to_string(violations)}});
  std::cout << "violations " << violations << '\n';
  return rows;
}

double cmd_bias(const RunContext& ctx, std::size_t k_max, std::size_t from_k) {
  if (k_max == 0) throw DomainError("K_max must be >= 1");
  if (from_k == 0 || from_k > k_max) throw DomainError("--from must lie in [1, K_max]");
  prepare_out_dir(ctx);
  const auto table = table_for(k_max, ctx);
  const auto set = interval_set(k_max, table, ctx);
  const auto bias = bias_series(set, table);
  CsvWriter w(out_file(ctx, "bias.csv"),
              {"k", "x", "a", "b", "c", "a_norm", "b_norm", "c_norm"});
  long double tail = 0;
  for (const auto& r : bias.rows) {
    w.cell(u64{r.k}).cell(r.x).cell(r.a).cell(r.b).cell(r.c).cell(r.a_norm).cell(r.b_norm)
        .cell(r.c_norm);
    w.end_row();
    if (r.k >= from_k) tail += r.a_norm;
  }
  w.close();
  const double mean = static_cast<double>(tail / (k_max - from_k + 1));
  std::cout << fmt::format("a_norm_mean {} (k >= {}); fit over all k: mean {} stdev {}\n",
                           format_real(mean), from_k, format_real(bias.a_norm_fit.mean),
                           format_real(bias.a_norm_fit.stdev));
  write_manifest(ctx, "bias", std::nullopt, k_max, {"bias.csv"},
                 {{"a_norm_mean_tail", format_real(mean)},
                  {"tail_from_k", std::to_string(from_k)},
                  {"a_norm_fit_mean", format_real(bias.a_norm_fit.mean)},
                  {"a_norm_fit_stdev", format_real(bias.a_norm_fit.stdev)}});
  return mean;
}

void cmd_corr(const RunContext& ctx, std::size_t k_max, std::size_t max_lag, std::size_t block) {
  if (k_max == 0) throw DomainError("K_max must be >= 1");
  prepare_out_dir(ctx);
  const auto table = table_for(k_max, ctx);
  const auto set = interval_set(k_max, table, ctx);
  std::vector<double> d;
  d.reserve(k_max);
  for (const auto& r : set.records()) d.push_back(static_cast<double>(r.pi_k) - r.li_k);

  const auto corr = lag_correlation(d, max_lag);
  CsvWriter w(out_file(ctx, "corr.csv"), {"lag_or_block", "value"});
  for (const auto& [lag, v] : corr.points) {
    w.cell(static_cast<u64>(lag)).cell(v);
    w.end_row();
  }
  w.close();
  std::vector<std::string> outputs{"corr.csv"};
  if (block > 0) {
    CsvWriter b(out_file(ctx, "corr_blocks.csv"), {"lag", "block", "value"});
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
      const auto series = block_lag_correlation(d, lag, block);
      for (const auto& [blk, v] : series.points) {
        b.cell(u64{lag}).cell(static_cast<u64>(blk)).cell(v);
        b.end_row();
      }
    }
    b.close();
    outputs.push_back("corr_blocks.csv");
  }
  write_manifest(ctx, "corr", std::nullopt, k_max, outputs,
                 {{"estimator", "uncentred, leading-index denominator"}});
}

std::size_t cmd_conjecture(const RunContext& ctx, std::size_t k_max) {
  if (k_max == 0) throw DomainError("K_max must be >= 1");
  prepare_out_dir(ctx);
  const auto table = table_for(k_max, ctx);
  const auto set = interval_set(k_max, table, ctx);
  const auto scan = conjecture_check(set);
  CsvWriter w(out_file(ctx, "conjecture.csv"), {"k", "x", "pi_minus_li", "sqrt_li"});
  for (const auto& r : scan.rows) {
    w.cell(u64{r.k}).cell(r.x).cell(r.pi_minus_li).cell(r.sqrt_li);
    w.end_row();
  }
  w.close();
  write_manifest(ctx, "conjecture", std::nullopt, k_max, {"conjecture.csv"},
                 {{"violations", std::to_string(scan.violations.size())}});
  std::cout << "violations " << scan.violations.size() << '\n';
  return scan.violations.size();
}

void cmd_gaps(const RunContext& ctx, std::size_t k, std::size_t run) {
  prepare_out_dir(ctx);
  const auto table = table_for(k, ctx);
  if (k == 0) throw DomainError("k must be >= 1");
  const u64 lo = checked_square(table.p(k));
  const u64 hi = checked_square(table.p(k + 1)) - 1;
  const auto primes = primes_in(lo, hi, table.first(k), ctx.sieve);
  if (primes.size() < 2) throw DomainError(fmt::format("s_{} holds fewer than two primes", k));
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < primes.size(); ++i)
    gaps.push_back(static_cast<double>(primes[i + 1] - primes[i]));
  const auto avg = moving_average(gaps, std::min(run, gaps.size()));
  CsvWriter w(out_file(ctx, "gaps.csv"), {"p_i", "g_i", "movavg"});
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    w.cell(primes[i]).cell(primes[i + 1] - primes[i]).cell(avg[i]);
    w.end_row();
  }
  w.close();
  write_manifest(ctx, "gaps", std::nullopt, k, {"gaps.csv"},
                 {{"run", std::to_string(run)},
                  {"expected_gap", format_real(2.0 * std::log(static_cast<double>(table.p(k + 1))))}});
}

void cmd_lengths(const RunContext& ctx, u64 x_max, double lambda) {
  if (x_max < 9) throw DomainError("x_max must be >= 9");
  prepare_out_dir(ctx);
  auto root = static_cast<u64>(std::sqrt(static_cast<long double>(x_max)));
  while (root * root > x_max) --root;
  // Prime gaps at this scale are far below 4096; the table must reach past sqrt(x_max).
  const auto table = build_prime_table(root + 4096, ctx.sieve);
  const auto series = phi_vs_lengths(x_max, lambda, table);
  CsvWriter w(out_file(ctx, "lengths.csv"), {"g", "x_cross"});
  for (const auto& [g, x] : series.points) {
    w.cell(static_cast<u64>(g)).cell(x);
    w.end_row();
  }
  w.close();
  write_manifest(ctx, "lengths", std::nullopt, table.count_upto(root), {"lengths.csv"},
                 {{"lambda", format_real(lambda)}, {"x_max", std::to_string(x_max)}});
}

GaussianFit cmd_deviation_pdf(const RunContext& ctx, const DeviationPdfOptions& opts) {
  if (opts.k_max == 0) throw DomainError("K_max must be >= 1");
  prepare_out_dir(ctx);
  const auto table = table_for(opts.k_max, ctx);
  const auto set = interval_set(opts.k_max, table, ctx);
  std::vector<double> samples;
  std::size_t seen = 0;
  for (const auto& r : set.records()) {
    if (opts.gap != 0 && r.gap != opts.gap) continue;
    if (seen++ < opts.start) continue;
    samples.push_back(static_cast<double>(r.pi_k) - r.li_k);
    if (opts.count != 0 && samples.size() == opts.count) break;
  }
  const auto pdf = empirical_pdf(samples, opts.bins);
  CsvWriter w(out_file(ctx, "pdf.csv"), {"bin_center", "density"});
  for (const auto& [x, d] : pdf.histogram.points) {
    w.cell(x).cell(d);
    w.end_row();
  }
  w.close();
  write_manifest(ctx, "deviation-pdf", std::nullopt, opts.k_max, {"pdf.csv"},
                 {{"fit_mean", format_real(pdf.fit.mean)},
                  {"fit_stdev", format_real(pdf.fit.stdev)},
                  {"samples", std::to_string(pdf.fit.sample_count)}});
  std::cout << fmt::format("samples {} mean {} stdev {}\n", pdf.fit.sample_count,
                           format_real(pdf.fit.mean), format_real(pdf.fit.stdev));
  return pdf.fit;
}

EstimateRow cmd_estimate(const RunContext& ctx, u64 x, bool count_offset) {
  if (x < 4) throw DomainError("x must be >= 4");
  auto root = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
  while (root * root > x) --root;
  while ((root + 1) * (root + 1) <= x) ++root;
  const auto table = build_prime_table(root + 4096, ctx.sieve);
  const std::size_t k = table.count_upto(root);  // x lies in s_k
  const auto set = interval_set(k, table, ctx);
  EstimateRow row;
  row.x = x;
  row.pi = count_primes_upto(x, table, ctx.sieve);
  row.li = li<double>(static_cast<double>(x));
  row.expected_pi = expected_pi_upto(x, set, table, count_offset);
  const auto bounds = sum_model_bounds(x, set, table, count_offset);
  row.model_mu = bounds.mu;
  row.sigma_bound = bounds.sigma_bound;
  std::cout << fmt::format("x {} pi {} li {} expected_pi {} model_mu {} sigma_bound {}\n", row.x,
                           row.pi, format_real(row.li), format_real(row.expected_pi),
                           format_real(row.model_mu), format_real(row.sigma_bound));
  return row;
}

bool cmd_replay(const fs::path& manifest_path) {
  const auto recorded = RunManifest::read(manifest_path);
  if (recorded.argv.empty()) throw IoError("manifest has an empty argv");
  if (recorded.version != kToolVersion)
    std::cerr << fmt::format("warning: manifest from version {}, running {}\n", recorded.version,
                             kToolVersion);
  const int rc = run_cli(recorded.argv);
  if (rc != kExitOk) throw DomainError(fmt::format("replayed command exited with {}", rc));
  const auto fresh = RunManifest::read(manifest_path);
  bool same = true;
  for (const auto& [name, sum] : recorded.checksums) {
    const auto it = fresh.checksums.find(name);
    const bool ok = it != fresh.checksums.end() && it->second == sum;
    std::cout << (ok ? "match " : "MISMATCH ") << name << '\n';
    same = same && ok;
  }
  return same;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"sievelab: prime counts and random models over the intervals [p_k^2, p_{k+1}^2)"};
  app.require_subcommand(1);
  app.fallthrough();

  RunContext ctx;
  ctx.argv = args;
  std::string out = ".";
  u64 segment = ctx.sieve.segment_size;
  unsigned threads = 1;
  app.add_option("--out", out, "Output directory")->envname("SIEVELAB_OUT");
  app.add_option("--threads", threads, "Worker threads")
      ->envname("SIEVELAB_THREADS")
      ->check(CLI::Range(1u, 4096u));
  app.add_option("--segment-size", segment, "Sieve segment size in integers")
      ->envname("SIEVELAB_SEGMENT_SIZE")
      ->check(CLI::Range(u64{64}, u64{1} << 34));
  app.add_flag("--quiet", ctx.quiet, "No progress output");

  auto kmax_option = [](CLI::App* sub, std::size_t& target, bool required = true) {
    auto* o = sub->add_option("--kmax", target, "Largest interval index K_max")
                  ->envname("SIEVELAB_KMAX")
                  ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
    if (required) o->required();
    return o;
  };

  IntervalsOptions iv;
  std::string checkpoint;
  auto* intervals = app.add_subcommand("intervals", "Per-interval prime counts and li_k");
  kmax_option(intervals, iv.k_max);
  intervals->add_option("--checkpoint", checkpoint, "Checkpoint file for resumable runs")
      ->envname("SIEVELAB_CHECKPOINT");
  intervals->add_option("--chunk", iv.chunk, "Intervals per checkpoint append")
      ->check(CLI::PositiveNumber);
  intervals->add_option("--max-chunks", iv.max_chunks, "Stop after this many chunks");

  MaierOptions mo{{500, 750, 1000}};
  auto* maier = app.add_subcommand("maier", "Maier-window density ratios inside s_k");
  maier->add_option("--k", mo.ks, "Interval indices")->delimiter(',');
  maier->add_option("--lambda", mo.lambda, "Window exponent")->envname("SIEVELAB_LAMBDA");
  maier->add_option("--step", mo.step, "Distance between scanned x (0: Phi/100)");
  maier->add_option("--delta-band", mo.delta_band, "Band half-width for the in-band fraction");

  std::size_t leg_min = 1, leg_max = 0;
  auto* legendre = app.add_subcommand("legendre", "Truncated expansion ratios and term counts");
  legendre->add_option("--kmin", leg_min, "First interval index")->check(CLI::PositiveNumber);
  kmax_option(legendre, leg_max);

  std::size_t rm_k = 0, rm_bins = 60;
  u64 budget = 1'000'000'000, seed = 0;
  auto* randmodel = app.add_subcommand("randmodel", "Shift sample space of s_k");
  randmodel->add_option("--k", rm_k, "Interval index")->required()->check(CLI::PositiveNumber);
  randmodel->add_option("--budget", budget, "Exhaustive if p_k# <= budget, else budget samples")
      ->envname("SIEVELAB_BUDGET")
      ->check(CLI::PositiveNumber);
  randmodel->add_option("--seed", seed, "Random seed")->envname("SIEVELAB_SEED");
  randmodel->add_option("--bins", rm_bins, "Histogram bins")->check(CLI::PositiveNumber);

  std::vector<std::size_t> var_ks{1, 2, 3, 4, 5, 6};
  u64 var_budget = 100'000;
  auto* variance = app.add_subcommand("variance", "Rescaled model variance against binomial");
  variance->add_option("--k", var_ks, "Interval indices")->delimiter(',');
  variance->add_option("--budget", var_budget, "Exhaustive if p_k# <= budget, else budget samples")
      ->envname("SIEVELAB_BUDGET")
      ->check(CLI::PositiveNumber);
  variance->add_option("--seed", seed, "Random seed")->envname("SIEVELAB_SEED");

  std::size_t bias_k = 0, bias_from = 0;
  auto* bias = app.add_subcommand("bias", "pi(x) - li(x) and the two interval-sum curves");
  kmax_option(bias, bias_k);
  bias->add_option("--from", bias_from, "First k of the reported tail mean (default K_max/2)");

  std::size_t corr_k = 0, max_lag = 500, block = 0;
  auto* corr = app.add_subcommand("corr", "Lag correlation of pi_k - li_k");
  kmax_option(corr, corr_k);
  corr->add_option("--max-lag", max_lag, "Largest lag");
  corr->add_option("--block", block, "Block length for per-block correlations (0: off)");

  std::size_t conj_k = 0;
  auto* conjecture = app.add_subcommand("conjecture", "|pi(x) - li(x)| against sqrt(li(x))");
  kmax_option(conjecture, conj_k);

  std::size_t gaps_k = 0, run = 25;
  auto* gaps = app.add_subcommand("gaps", "Prime gaps inside s_k with a moving average");
  gaps->add_option("--k", gaps_k, "Interval index")->required()->check(CLI::PositiveNumber);
  gaps->add_option("--run", run, "Moving-average run")->check(CLI::PositiveNumber);

  u64 x_max = 0;
  double len_lambda = 3.0;
  auto* lengths = app.add_subcommand("lengths", "Where interval lengths outgrow Phi(x)");
  lengths->add_option("--xmax", x_max, "Largest x")->required();
  lengths->add_option("--lambda", len_lambda, "Window exponent")->envname("SIEVELAB_LAMBDA");

  DeviationPdfOptions dp;
  auto* devpdf = app.add_subcommand("deviation-pdf", "Histogram of pi_k - li_k");
  kmax_option(devpdf, dp.k_max);
  devpdf->add_option("--start", dp.start, "Matching intervals to skip");
  devpdf->add_option("--count", dp.count, "Matching intervals to use (0: all)");
  devpdf->add_option("--gap", dp.gap, "Only intervals with this g_k (0: all)");
  devpdf->add_option("--bins", dp.bins, "Histogram bins")->check(CLI::PositiveNumber);

  u64 est_x = 0;
  bool count_offset = false;
  auto* estimate = app.add_subcommand("estimate", "pi(x), li(x) and the model estimates at x");
  estimate->add_option("--x", est_x, "Point to evaluate")->required();
  estimate->add_flag("--count-offset", count_offset, "Add the primes 2 and 3 to the estimates")
      ->envname("SIEVELAB_COUNT_OFFSET");

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare checksums");
  replay->add_option("manifest", manifest_path, "manifest.json to replay")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  ctx.out_dir = out;
  ctx.sieve.segment_size = segment;
  ctx.sieve.threads = threads;
  try {
    if (*intervals) {
      if (!checkpoint.empty()) iv.checkpoint = fs::path(checkpoint);
      cmd_intervals(ctx, iv);
    } else if (*maier) {
      cmd_maier(ctx, mo);
    } else if (*legendre) {
      cmd_legendre(ctx, leg_min, leg_max);
    } else if (*randmodel) {
      cmd_randmodel(ctx, rm_k, budget, seed, rm_bins);
    } else if (*variance) {
      cmd_variance(ctx, var_ks, var_budget, seed);
    } else if (*bias) {
      cmd_bias(ctx, bias_k, bias_from == 0 ? std::max<std::size_t>(1, bias_k / 2) : bias_from);
    } else if (*corr) {
      cmd_corr(ctx, corr_k, max_lag, block);
    } else if (*conjecture) {
      cmd_conjecture(ctx, conj_k);
    } else if (*gaps) {
      cmd_gaps(ctx, gaps_k, run);
    } else if (*lengths) {
      cmd_lengths(ctx, x_max, len_lambda);
    } else if (*devpdf) {
      cmd_deviation_pdf(ctx, dp);
    } else if (*estimate) {
      cmd_estimate(ctx, est_x, count_offset);
    } else if (*replay) {
      return cmd_replay(manifest_path) ? kExitOk : kExitDomain;
    }
  } catch (const DomainError& e) {
    std::cerr << "sievelab: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ResourceError& e) {
    std::cerr << "sievelab: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "sievelab: out of memory\n";
    return kExitResource;
  } catch (const IoError& e) {
    std::cerr << "sievelab: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "sievelab: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace sievelab::cli
