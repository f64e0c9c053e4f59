#pragma once

// Minimal CSV emitter: header row, comma separated, LF line endings. Reals use
// 15 significant digits so output bytes are stable across runs.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace sievelab {

std::string format_real(double v);

class CsvWriter {
 public:
  CsvWriter(std::string path, std::initializer_list<std::string_view> header);
  CsvWriter(std::string path, const std::vector<std::string>& header);

  // Cells are appended left to right; end_row() checks the column count.
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(std::int64_t v);
  CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  void end_row();

  // Flushes and closes; throws IoError on any write failure.
  void close();
  const std::string& path() const noexcept { return path_; }

 private:
  void write_header(const std::vector<std::string>& header);

  std::string path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t pending_ = 0;
  std::string row_;
};

}  // namespace sievelab
