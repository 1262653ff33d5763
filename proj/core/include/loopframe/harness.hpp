#pragma once

#include "loopframe/table_io.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopframe::harness {

// Bad or missing configuration; the CLI maps this to exit code 2 (runtime
// failures map to 3).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Key/value experiment description. Values arrive as text from the config
// file and/or same-named command-line flags (flags win); typed accessors do
// the parsing and complain through ConfigError.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string require(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double require_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t require_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t require_seed() const;  // every run must pin its seed
  std::filesystem::path outdir() const;
};

// Plain key=value lines, '#' comments; later keys win within the file.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& p);

struct ResultManifest {
  std::string command;
  int workers = 1;
  double wall_ms = 0.0;
  std::map<std::string, std::string> config_echo;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;  // name, fnv1a64
  std::uint64_t combined_hash = 0;  // over output bytes, independent of timing
};

// Dispatches on config.command (sample-loops | evolve-nls | simulate-frames |
// analyze | jk), runs path-level workers where the experiment parallelizes,
// writes all outputs atomically into outdir, and writes manifest.txt last, so
// a manifest's existence implies the listed files are complete.
ResultManifest run_experiment(const RunConfig& config);

// Per-s slice of a frame ensemble, plus the statistics analyze derives.
// -1 marks a statistic that was not computable on that slice (too few
// points, or a degenerate contingency table).
struct SliceStats {
  double s = 0.0;
  std::int64_t count = 0;
  double w1_theta = 0.0, w1_phi = 0.0;
  double bound_theta = -1.0, bound_phi = -1.0, bound_conditional = -1.0,
         bound_total = -1.0;
  double ks_d_theta = -1.0, ks_p_theta = -1.0;
  double ks_d_phi = -1.0, ks_p_phi = -1.0;
  double chi2_stat = -1.0, chi2_p = -1.0;
  int chi2_dof = 0;
};

struct AnalysisResults {
  std::vector<SliceStats> slices;  // ascending in s
  std::vector<std::vector<double>> theta_by_slice;
  std::vector<std::vector<double>> phi_by_slice;
  int bins_theta = 0, bins_phi = 0;
};

AnalysisResults analyze_angle_table(const io::Table& frames, int binsTheta,
                                    int binsPhi);

// Plot-ready projections: (s, W1) series for both angles and a 2-D
// theta x phi histogram grid per slice.
void emit_plot_data(const AnalysisResults& results,
                    const std::filesystem::path& outdir);

// Little-endian binary path dump. Layout: 8-byte magic "LFPATH01",
// uint64 record count, uint32 field count (4), uint32 reserved (0), then
// records of field-count doubles: s, y_x, y_y, y_z.
void write_path_dump(const std::filesystem::path& file,
                     const std::vector<double>& s,
                     const std::vector<std::array<double, 3>>& y);

struct PathDump {
  std::vector<double> s;
  std::vector<std::array<double, 3>> y;
};
PathDump read_path_dump(const std::filesystem::path& file);

}  // namespace loopframe::harness
