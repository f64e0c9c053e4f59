#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sievelab/randmodel.hpp"
#include "sievelab/sieve.hpp"
#include "sievelab/stats.hpp"

namespace sievelab::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitIo = 4;

struct RunContext {
  std::filesystem::path out_dir = ".";
  std::vector<std::string> argv;
  SieveConfig sieve;
  bool quiet = false;  // no progress lines on stderr
};

struct IntervalsOptions {
  std::size_t k_max = 0;
  std::optional<std::filesystem::path> checkpoint;
  std::size_t chunk = 1000;     // intervals per checkpoint append
  std::size_t max_chunks = 0;   // stop after this many chunks (0 = run to the end)
};

// intervals.csv and deviations.csv. Returns false when max_chunks stopped the
// run early; the checkpoint then holds the progress and no CSV is written.
bool cmd_intervals(const RunContext& ctx, const IntervalsOptions& opts);

struct MaierOptions {
  std::vector<std::size_t> ks;
  double lambda = 3.0;
  std::uint64_t step = 0;  // 0: ceil(Phi(p_k^2) / 100)
  double delta_band = 0.03;
};

// maier_k<k>.csv per interval plus maier_summary.csv; returns delta_lambda.
double cmd_maier(const RunContext& ctx, const MaierOptions& opts);

// legendre.csv and terms.csv over k_min..k_max.
void cmd_legendre(const RunContext& ctx, std::size_t k_min, std::size_t k_max);

// model_summary.csv and model_pdf.csv (density of (e^gamma/2) S - li_k).
ShiftModelSummary cmd_randmodel(const RunContext& ctx, std::size_t k, std::uint64_t budget,
                                std::uint64_t seed, std::size_t bins);

// variance.csv over the listed k.
std::vector<VarianceRow> cmd_variance(const RunContext& ctx, const std::vector<std::size_t>& ks,
                                      std::uint64_t budget, std::uint64_t seed);

// bias.csv; returns the mean of a_norm over k >= from_k.
double cmd_bias(const RunContext& ctx, std::size_t k_max, std::size_t from_k);

// corr.csv (lag, value) and, when block > 0, corr_blocks.csv (lag, block, value).
void cmd_corr(const RunContext& ctx, std::size_t k_max, std::size_t max_lag, std::size_t block);

// conjecture.csv; returns the number of violations.
std::size_t cmd_conjecture(const RunContext& ctx, std::size_t k_max);

// gaps.csv for s_k with a moving average over `run` gaps.
void cmd_gaps(const RunContext& ctx, std::size_t k, std::size_t run);

// lengths.csv: gap class g against the x beyond which l_g(x) > Phi(x).
void cmd_lengths(const RunContext& ctx, std::uint64_t x_max, double lambda);

struct DeviationPdfOptions {
  std::size_t k_max = 0;
  std::size_t start = 0;   // skip this many matching intervals
  std::size_t count = 0;   // then take this many (0 = all)
  std::uint64_t gap = 0;   // only intervals with g_k == gap (0 = all)
  std::size_t bins = 40;
};

// pdf.csv of pi_k - li_k; returns the moment fit.
GaussianFit cmd_deviation_pdf(const RunContext& ctx, const DeviationPdfOptions& opts);

struct EstimateRow {
  std::uint64_t x = 0;
  std::uint64_t pi = 0;
  double li = 0;
  double expected_pi = 0;  // Euler-product estimate
  double model_mu = 0;     // PNT-rescaled model mean
  double sigma_bound = 0;
};

// Single-point query printed on stdout; --count-offset adds the primes 2 and 3
// to both estimates.
EstimateRow cmd_estimate(const RunContext& ctx, std::uint64_t x, bool count_offset);

// Re-runs the argv recorded in a manifest and compares output checksums.
// Returns true when every output matches.
bool cmd_replay(const std::filesystem::path& manifest_path);

// Full command-line entry point: parses args (args[0] is the program name),
// dispatches, and maps errors to exit codes.
int run_cli(const std::vector<std::string>& args);

}  // namespace sievelab::cli
