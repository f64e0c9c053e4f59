#include "checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sievelab/errors.hpp"

namespace sievelab::cli {

namespace {

constexpr std::string_view kHeader = "k,p_k,pi_k";

u64 parse_field(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  u64 v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw IoError(fmt::format("{}:{}: bad field '{}'", path.string(), line, text));
  return v;
}

}  // namespace

std::vector<CheckpointRow> load_checkpoint(const std::filesystem::path& path) {
  std::vector<CheckpointRow> rows;
  if (!std::filesystem::exists(path)) return rows;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read checkpoint {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::size_t pos = 0, line = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // torn final line
    const std::string_view row(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (++line == 1) {
      if (row != kHeader) throw IoError(fmt::format("{}: unexpected header", path.string()));
      continue;
    }
    const auto c1 = row.find(',');
    const auto c2 = row.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw IoError(fmt::format("{}:{}: expected three fields", path.string(), line));
    CheckpointRow r;
    r.k = parse_field(row.substr(0, c1), path, line);
    r.p_k = parse_field(row.substr(c1 + 1, c2 - c1 - 1), path, line);
    r.pi_k = parse_field(row.substr(c2 + 1), path, line);
    if (r.k != rows.size() + 1)
      throw IoError(fmt::format("{}:{}: expected k = {}, found {}", path.string(), line,
                                rows.size() + 1, r.k));
    rows.push_back(r);
  }
  // Cut a torn tail so later appends start on a fresh line.
  if (pos < text.size()) std::filesystem::resize_file(path, pos);
  return rows;
}

void append_checkpoint(const std::filesystem::path& path, std::span<const CheckpointRow> rows) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError(fmt::format("cannot open checkpoint {}", path.string()));
  std::string chunk;
  if (fresh) chunk = fmt::format("{}\n", kHeader);
  for (const auto& r : rows) chunk += fmt::format("{},{},{}\n", r.k, r.p_k, r.pi_k);
  out << chunk;
  out.flush();
  if (!out) throw IoError(fmt::format("write to checkpoint {} failed", path.string()));
}

}  // namespace sievelab::cli
