#pragma once

// Resumable record of an interval scan: one (k, p_k, pi_k) row per finished
// interval. li_k and the other derived fields are recomputed on resume, so the
// final CSVs do not depend on how the run was split.

#include <filesystem>
#include <span>
#include <vector>

#include "sievelab/sieve.hpp"

namespace sievelab::cli {

struct CheckpointRow {
  std::size_t k = 0;
  u64 p_k = 0;
  u64 pi_k = 0;
};

// Missing file gives no rows. A final line without its newline is treated as
// an interrupted write and cut from the file. Rows must run 1, 2, 3, ...
std::vector<CheckpointRow> load_checkpoint(const std::filesystem::path& path);

// Appends rows (writing the header first for a new file) and flushes.
void append_checkpoint(const std::filesystem::path& path, std::span<const CheckpointRow> rows);

}  // namespace sievelab::cli
