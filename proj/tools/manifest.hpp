#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sievelab::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::optional<std::uint64_t> seed;
  std::size_t k_max = 0;
  std::string version = kToolVersion;
  int schema_version = kSchemaVersion;
  std::map<std::string, std::string> checksums;  // file name -> sha256
  std::map<std::string, std::string> notes;      // small scalar results

  // Hashes every listed output (relative to dir) and writes dir/manifest.json.
  void write(const std::filesystem::path& dir, const std::vector<std::string>& outputs);

  static RunManifest read(const std::filesystem::path& file);
};

}  // namespace sievelab::cli
