#include "loopframe/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loopframe::io {

int Table::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> Table::column(const std::string& name) const {
  int idx = column_index(name);
  if (idx < 0) throw std::invalid_argument("table: no column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

std::string format_table(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.metadata) {
    out += "# ";
    out += k;
    out += " ";
    out += v;
    out += "\n";
  }
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += "\t";
    out += t.columns[i];
  }
  out += "\n";
  char buf[32];
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size())
      throw std::invalid_argument("table: row width != header width");
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out += "\t";
      std::snprintf(buf, sizeof buf, "%.17g", r[i]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

Table parse_table(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      t.metadata.emplace_back(key, rest);
      continue;
    }
    std::istringstream ls(line);
    if (!header_seen) {
      std::string name;
      while (ls >> name) t.columns.push_back(name);
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.size() != t.columns.size())
      throw std::runtime_error("table: malformed row '" + line + "'");
    t.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::runtime_error("table: missing header line");
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Table read_table(const std::filesystem::path& path) {
  return parse_table(read_file(path));
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_table(const std::filesystem::path& path, const Table& t) {
  atomic_write(path, format_table(t));
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  return fnv1a64(read_file(path));
}

}  // namespace loopframe::io
