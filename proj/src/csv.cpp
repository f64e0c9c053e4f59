#include "sievelab/csv.hpp"

#include <fmt/format.h>

#include "sievelab/errors.hpp"

namespace sievelab {

std::string format_real(double v) { return fmt::format("{:.15g}", v); }

CsvWriter::CsvWriter(std::string path, std::initializer_list<std::string_view> header)
    : CsvWriter(std::move(path), std::vector<std::string>(header.begin(), header.end())) {}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header)
    : path_(std::move(path)), out_(path_, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError(fmt::format("cannot open {} for writing", path_));
  write_header(header);
}

void CsvWriter::write_header(const std::vector<std::string>& header) {
  columns_ = header.size();
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (pending_++ > 0) row_ += ',';
  row_ += text;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_real(v))); }
CsvWriter& CsvWriter::cell(std::uint64_t v) { return cell(std::string_view(fmt::format("{}", v))); }
CsvWriter& CsvWriter::cell(std::int64_t v) { return cell(std::string_view(fmt::format("{}", v))); }

void CsvWriter::end_row() {
  if (pending_ != columns_)
    throw IoError(fmt::format("{}: row has {} cells, header has {}", path_, pending_, columns_));
  row_ += '\n';
  out_ << row_;
  row_.clear();
  pending_ = 0;
  if (!out_) throw IoError(fmt::format("write to {} failed", path_));
}

void CsvWriter::close() {
  if (pending_ != 0) throw IoError(fmt::format("{}: unfinished row at close", path_));
  out_.flush();
  out_.close();
  if (out_.fail()) throw IoError(fmt::format("closing {} failed", path_));
}

}  // namespace sievelab
