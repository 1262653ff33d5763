#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace loopframe::io {

// Column-delimited numeric table. On disk: '#'-prefixed metadata lines, then a
// single whitespace-delimited header line of column names, then one row per
// line. Values are written with %.17g so a read-back reproduces the doubles
// bit-for-bit.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
  std::vector<double> column(const std::string& name) const;
};

std::string format_table(const Table& t);
Table parse_table(const std::string& text);
Table read_table(const std::filesystem::path& path);

// Write-to-temp-then-rename; a crash mid-write never leaves a truncated file
// under the final name.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);
void write_table(const std::filesystem::path& path, const Table& t);

// FNV-1a 64 over the raw bytes; stable content fingerprint for manifests.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t hash_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace loopframe::io
