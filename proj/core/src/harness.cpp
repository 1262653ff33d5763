#include "loopframe/harness.hpp"

#include "loopframe/frame_sde.hpp"
#include "loopframe/loop_sampler.hpp"
#include "loopframe/nls_flow.hpp"
#include "loopframe/parallel.hpp"
#include "loopframe/partition_kernel.hpp"
#include "loopframe/transport_stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace loopframe::harness {

namespace fs = std::filesystem;

std::string RunConfig::require(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError(command + ": missing key '" + key + "'");
  return it->second;
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as number");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as integer");
  }
}

}  // namespace

double RunConfig::require_double(const std::string& key) const {
  return parse_double(key, require(key));
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_double(key, it->second);
}

std::int64_t RunConfig::require_int(const std::string& key) const {
  return parse_int(key, require(key));
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_int(key, it->second);
}

std::uint64_t RunConfig::require_seed() const {
  std::int64_t s = require_int("seed");
  if (s < 0) throw ConfigError("seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

fs::path RunConfig::outdir() const { return fs::path(require("out")); }

std::map<std::string, std::string> parse_config_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read config file " + p.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
      if (value.empty() && !(ls >> value))
        throw ConfigError("config line without value: '" + line + "'");
    } else {
      if (!(ls >> value))
        throw ConfigError("config line without value: '" + line + "'");
      if (value == "=" && !(ls >> value))
        throw ConfigError("config line without value: '" + line + "'");
      if (value.size() > 1 && value.front() == '=') value.erase(0, 1);
    }
    std::string extra;
    if (ls >> extra)
      throw ConfigError("config line has trailing tokens: '" + line + "'");
    if (key.empty() || value.empty())
      throw ConfigError("malformed config line: '" + line + "'");
    kv[key] = value;
  }
  return kv;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_allowed_keys(const RunConfig& cfg, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : cfg.kv)
    if (!allowed.count(key))
      throw ConfigError(cfg.command + ": unknown key '" + key + "'");
}

class OutputSet {
 public:
  explicit OutputSet(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec && !fs::is_directory(dir_))
      throw std::runtime_error("cannot create output directory " + dir_.string());
  }

  void write_table(const std::string& name, const io::Table& t) {
    io::write_table(dir_ / name, t);
    names_.push_back(name);
  }

  void note(const std::string& name) { names_.push_back(name); }

  // Hashes every recorded file and writes manifest.txt; call once, last.
  void finish(ResultManifest& m) const {
    std::string combined;
    char buf[32];
    for (const auto& name : names_) {
      std::uint64_t h = io::hash_file(dir_ / name);
      m.outputs.emplace_back(name, h);
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
      combined += buf;
    }
    m.combined_hash = io::fnv1a64(combined);
    std::string text = "# loopframe manifest\n";
    text += "command " + m.command + "\n";
    text += "workers " + std::to_string(m.workers) + "\n";
    std::snprintf(buf, sizeof buf, "%.3f", m.wall_ms);
    text += "wall_ms " + std::string(buf) + "\n";
    for (const auto& [k, v] : m.config_echo) text += "config " + k + " " + v + "\n";
    for (const auto& [name, h] : m.outputs) {
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
      text += "output " + name + " " + buf + "\n";
    }
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(m.combined_hash));
    text += "combined " + std::string(buf) + "\n";
    io::atomic_write(dir_ / "manifest.txt", text);
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

int resolve_workers(const RunConfig& cfg) {
  std::int64_t w = cfg.get_int("workers", 0);
  if (w < 0) throw ConfigError("workers must be >= 0");
  return w == 0 ? parallel::default_workers() : static_cast<int>(w);
}

void run_sample_loops(const RunConfig& cfg, OutputSet& out, ResultManifest& m) {
  check_allowed_keys(cfg, {"seed", "out", "workers", "modes", "proposals",
                           "lambda", "K", "beta"});
  const std::uint64_t seed = cfg.require_seed();
  const int modes = static_cast<int>(cfg.require_int("modes"));
  const std::int64_t proposals = cfg.require_int("proposals");
  const double lambda = cfg.get_double("lambda", 0.0);
  const double K = cfg.get_double("K", std::numeric_limits<double>::infinity());
  const double beta = cfg.get_double("beta", 1.0);

  auto ens = loop_sampler::gibbs_ensemble(modes, proposals, lambda, K, seed);

  io::Table t;
  t.metadata = {{"command", cfg.command},
                {"modes", std::to_string(modes)},
                {"proposals", std::to_string(proposals)},
                {"acceptance", std::to_string(ens.acceptance)},
                {"ess", std::to_string(ens.ess)},
                {"beta", std::to_string(beta)}};
  t.columns = {"sample", "h1", "h2", "h3", "weight"};
  for (size_t i = 0; i < ens.samples.size(); ++i) {
    auto inv = loop_sampler::invariants(ens.samples[i], beta);
    t.rows.push_back({static_cast<double>(ens.proposal_id[i]), inv.h1, inv.h2,
                      inv.h3, ens.weights[i]});
  }
  m.workers = 1;
  out.write_table("loops.tsv", t);
}

nls_flow::NlsState initial_nls_state(const RunConfig& cfg, int modes, double beta,
                                     std::uint64_t seed) {
  const std::string spec = cfg.get("initial", "0");
  // Either a stream index into the loop sampler or a spectrum table on disk.
  bool is_stream = !spec.empty() &&
                   spec.find_first_not_of("0123456789") == std::string::npos;
  if (is_stream) {
    rng::Gaussian g(seed, static_cast<std::uint64_t>(parse_int("initial", spec)));
    return nls_flow::from_loop(loop_sampler::sample_wiener_loop(modes, g), beta);
  }
  io::Table t = io::read_table(spec);
  nls_flow::NlsState s(modes, beta);
  int ik = t.column_index("k"), ire = t.column_index("re"), iim = t.column_index("im");
  if (ik < 0 || ire < 0 || iim < 0)
    throw ConfigError("initial state table needs columns k, re, im");
  for (const auto& row : t.rows) {
    int k = static_cast<int>(row[ik]);
    if (k < -modes || k > modes)
      throw ConfigError("initial state has modes outside |k| <= modes");
    s.set(k, {row[ire], row[iim]});
  }
  return s;
}

void run_evolve_nls(const RunConfig& cfg, OutputSet& out, ResultManifest& m) {
  check_allowed_keys(cfg, {"seed", "out", "workers", "modes", "beta", "dt",
                           "steps", "initial", "record-every"});
  const std::uint64_t seed = cfg.require_seed();
  const int modes = static_cast<int>(cfg.require_int("modes"));
  const double beta = cfg.require_double("beta");
  const double dt = cfg.require_double("dt");
  const std::int64_t steps = cfg.require_int("steps");
  const std::int64_t every = cfg.get_int("record-every", 1);
  if (steps < 0 || every < 1)
    throw ConfigError("evolve-nls: steps must be >= 0 and record-every >= 1");

  nls_flow::NlsState state = initial_nls_state(cfg, modes, beta, seed);

  io::Table traj;
  traj.metadata = {{"command", cfg.command},
                   {"modes", std::to_string(modes)},
                   {"beta", std::to_string(beta)},
                   {"dt", std::to_string(dt)}};
  traj.columns = {"step", "t", "h1", "h2", "h3"};
  auto record = [&](std::int64_t step, const nls_flow::NlsState& s) {
    auto inv = nls_flow::invariants(s);
    traj.rows.push_back({static_cast<double>(step), s.time(), inv.h1, inv.h2, inv.h3});
  };
  record(0, state);
  std::int64_t step = 0;
  auto rep = nls_flow::evolve(state, dt, static_cast<int>(steps),
                              [&](const nls_flow::NlsState& s) {
                                ++step;
                                if (step % every == 0 || step == steps) record(step, s);
                              });

  io::Table drift;
  drift.metadata = traj.metadata;
  drift.columns = {"h1_initial", "h2_initial", "h3_initial",
                   "h1_drift", "h1_rel_drift", "h2_drift", "h3_drift"};
  drift.rows.push_back({rep.h1_initial, rep.h2_initial, rep.h3_initial,
                        rep.h1_drift, rep.h1_rel_drift, rep.h2_drift, rep.h3_drift});

  io::Table fin;
  fin.metadata = traj.metadata;
  fin.columns = {"k", "re", "im"};
  for (int k = -modes; k <= modes; ++k)
    fin.rows.push_back({static_cast<double>(k), state.c(k).real(), state.c(k).imag()});

  m.workers = 1;
  out.write_table("trajectory.tsv", traj);
  out.write_table("drift_report.tsv", drift);
  out.write_table("final_state.tsv", fin);
}

void run_simulate_frames(const RunConfig& cfg, OutputSet& out, ResultManifest& m) {
  check_allowed_keys(cfg, {"seed", "out", "workers", "epsilon", "h", "T", "paths",
                           "record-every", "dump-paths", "dump-stride",
                           "periodic-extension"});
  frame_sde::FrameConfig fc;
  fc.seed = cfg.require_seed();
  fc.epsilon = cfg.get_double("epsilon", 1e-2);
  fc.h = cfg.require_double("h");
  fc.T = cfg.require_double("T");
  fc.record_stride = cfg.get_int("record-every", 0);
  fc.periodic_extension = cfg.get_int("periodic-extension", 0) != 0;
  const std::int64_t paths = cfg.require_int("paths");
  const std::int64_t dump_paths = cfg.get_int("dump-paths", 0);
  const std::int64_t dump_stride = cfg.get_int("dump-stride", 1);
  if (paths < 1) throw ConfigError("simulate-frames: paths must be >= 1");
  if (dump_stride < 1) throw ConfigError("simulate-frames: dump-stride must be >= 1");
  const int workers = resolve_workers(cfg);
  const std::int64_t dumped = std::min(dump_paths, paths);

  struct PathRecord {
    std::vector<double> s, theta, phi;
    std::vector<std::array<double, 3>> y;  // kept only for dumped paths
  };
  std::vector<PathRecord> rec(static_cast<size_t>(paths));
  parallel::parallel_for(paths, workers, [&](std::int64_t i) {
    auto path = frame_sde::simulate_frame_path(fc, static_cast<std::uint64_t>(i));
    PathRecord& r = rec[static_cast<size_t>(i)];
    r.s = path.s;
    r.theta = path.theta;
    r.phi = path.phi;
    if (i < dumped) {
      r.y.reserve(path.y.size());
      for (const auto& v : path.y) r.y.push_back({v.x(), v.y(), v.z()});
    }
  });

  io::Table t;
  t.metadata = {{"command", cfg.command},
                {"epsilon", std::to_string(fc.epsilon)},
                {"h", std::to_string(fc.h)},
                {"T", std::to_string(fc.T)},
                {"paths", std::to_string(paths)}};
  t.columns = {"path", "s", "theta", "phi"};
  for (std::int64_t i = 0; i < paths; ++i) {
    const PathRecord& r = rec[static_cast<size_t>(i)];
    for (size_t j = 0; j < r.s.size(); ++j)
      t.rows.push_back({static_cast<double>(i), r.s[j], r.theta[j], r.phi[j]});
  }

  m.workers = workers;
  out.write_table("frames_angles.tsv", t);
  for (std::int64_t i = 0; i < dumped; ++i) {
    const PathRecord& r = rec[static_cast<size_t>(i)];
    std::vector<double> s;
    std::vector<std::array<double, 3>> y;
    for (size_t j = 0; j < r.s.size(); j += static_cast<size_t>(dump_stride)) {
      s.push_back(r.s[j]);
      y.push_back(r.y[j]);
    }
    std::string name = "path_" + std::to_string(i) + ".bin";
    write_path_dump(out.dir() / name, s, y);
    out.note(name);
  }
}

void run_jk(const RunConfig& cfg, OutputSet& out, ResultManifest& m) {
  check_allowed_keys(cfg, {"seed", "out", "workers", "k", "alphas"});
  cfg.require_seed();  // uniform interface; the expansion itself is deterministic
  const int k = static_cast<int>(cfg.require_int("k"));
  const fs::path alpha_file = cfg.require("alphas");
  std::ifstream in(alpha_file);
  if (!in) throw ConfigError("jk: cannot read alphas file " + alpha_file.string());
  std::vector<double> alphas;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double v;
    while (ls >> v) alphas.push_back(v);
  }
  if (alphas.empty()) throw ConfigError("jk: alphas file holds no numbers");

  auto terms = partition_kernel::assemble_jk(k, alphas);

  io::Table t;
  t.metadata = {{"command", cfg.command},
                {"k", std::to_string(k)},
                {"basis", std::to_string(alphas.size())},
                {"terms", std::to_string(terms.size())}};
  for (int i = 1; i <= k; ++i) t.columns.push_back("bra_" + std::to_string(i));
  for (int i = 1; i <= k; ++i) t.columns.push_back("ket_" + std::to_string(i));
  t.columns.push_back("coefficient");
  for (const auto& term : terms) {
    std::vector<double> row;
    auto expand = [&row](const std::map<int, int>& side) {
      for (auto [idx, mult] : side)
        for (int c = 0; c < mult; ++c) row.push_back(static_cast<double>(idx));
    };
    expand(term.bra);
    expand(term.ket);
    row.push_back(term.coefficient);
    t.rows.push_back(std::move(row));
  }

  m.workers = 1;
  out.write_table("jk_terms.tsv", t);
}

void run_analyze(const RunConfig& cfg, OutputSet& out, ResultManifest& m) {
  check_allowed_keys(cfg, {"seed", "out", "workers", "input", "bins-theta",
                           "bins-phi"});
  cfg.require_seed();
  const fs::path input = cfg.require("input");
  const int bins_theta = static_cast<int>(cfg.get_int("bins-theta", 8));
  const int bins_phi = static_cast<int>(cfg.get_int("bins-phi", 8));
  if (bins_theta < 2 || bins_phi < 2)
    throw ConfigError("analyze: bins-theta and bins-phi must be >= 2");

  io::Table frames = io::read_table(input);
  AnalysisResults res = analyze_angle_table(frames, bins_theta, bins_phi);

  io::Table t;
  t.metadata = {{"command", cfg.command},
                {"input", input.string()},
                {"independence-test", "chi2-independence"},
                {"sentinel", "-1 marks statistics that were not computable"}};
  t.columns = {"s", "count", "w1_theta", "w1_phi", "bound_theta", "bound_phi",
               "bound_conditional", "bound_total", "ks_d_theta", "ks_p_theta",
               "ks_d_phi", "ks_p_phi", "chi2_stat", "chi2_dof", "chi2_p"};
  for (const auto& sl : res.slices)
    t.rows.push_back({sl.s, static_cast<double>(sl.count), sl.w1_theta, sl.w1_phi,
                      sl.bound_theta, sl.bound_phi, sl.bound_conditional,
                      sl.bound_total, sl.ks_d_theta, sl.ks_p_theta, sl.ks_d_phi,
                      sl.ks_p_phi, sl.chi2_stat, static_cast<double>(sl.chi2_dof),
                      sl.chi2_p});

  m.workers = 1;
  out.write_table("analysis.tsv", t);
  emit_plot_data(res, out.dir());
  out.note("series_w1_theta.tsv");
  out.note("series_w1_phi.tsv");
  for (size_t i = 0; i < res.slices.size(); ++i)
    out.note("hist2d_" + std::to_string(i) + ".tsv");
}

}  // namespace

AnalysisResults analyze_angle_table(const io::Table& frames, int binsTheta,
                                    int binsPhi) {
  int is = frames.column_index("s");
  int it = frames.column_index("theta");
  int ip = frames.column_index("phi");
  if (is < 0 || it < 0 || ip < 0)
    throw std::invalid_argument("analyze: table needs columns s, theta, phi");

  std::map<double, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& row : frames.rows) {
    auto& g = groups[row[is]];
    g.first.push_back(row[it]);
    g.second.push_back(row[ip]);
  }

  AnalysisResults res;
  res.bins_theta = binsTheta;
  res.bins_phi = binsPhi;
  const auto F1 = transport_stats::longitude_reference();
  const auto G1 = transport_stats::colatitude_reference();
  for (auto& [s, g] : groups) {
    SliceStats sl;
    sl.s = s;
    sl.count = static_cast<std::int64_t>(g.first.size());
    transport_stats::EmpiricalCdf theta_cdf(g.first);
    transport_stats::EmpiricalCdf phi_cdf(g.second);
    sl.w1_theta = transport_stats::w1_cdf(theta_cdf, F1);
    sl.w1_phi = transport_stats::w1_cdf(phi_cdf, G1);
    transport_stats::SphereSampleSet set{g.first, g.second};
    if (sl.count >= 100) {
      auto b = transport_stats::sphere_w1_bound(set);
      sl.bound_theta = b.theta_term;
      sl.bound_phi = b.phi_term;
      sl.bound_conditional = b.conditional_term;
      sl.bound_total = b.total;
    }
    if (sl.count >= 10) {
      auto kt = transport_stats::ks_test(g.first, F1);
      auto kp = transport_stats::ks_test(g.second, G1);
      sl.ks_d_theta = kt.d;
      sl.ks_p_theta = kt.p;
      sl.ks_d_phi = kp.d;
      sl.ks_p_phi = kp.p;
    }
    try {
      auto c2 = transport_stats::chi2_independence(set, binsTheta, binsPhi);
      sl.chi2_stat = c2.stat;
      sl.chi2_dof = c2.dof;
      sl.chi2_p = c2.p;
    } catch (const std::exception&) {
      // Degenerate slice (too few points or collapsed bins); sentinels stay.
    }
    res.slices.push_back(sl);
    res.theta_by_slice.push_back(std::move(g.first));
    res.phi_by_slice.push_back(std::move(g.second));
  }
  return res;
}

void emit_plot_data(const AnalysisResults& results, const fs::path& outdir) {
  io::Table wt;
  wt.metadata = {{"series", "w1 longitude vs s"}};
  wt.columns = {"s", "w1_theta"};
  io::Table wp;
  wp.metadata = {{"series", "w1 colatitude vs s"}};
  wp.columns = {"s", "w1_phi"};
  for (const auto& sl : results.slices) {
    wt.rows.push_back({sl.s, sl.w1_theta});
    wp.rows.push_back({sl.s, sl.w1_phi});
  }
  io::write_table(outdir / "series_w1_theta.tsv", wt);
  io::write_table(outdir / "series_w1_phi.tsv", wp);

  for (size_t i = 0; i < results.slices.size(); ++i) {
    const auto& theta = results.theta_by_slice[i];
    const auto& phi = results.phi_by_slice[i];
    const int bt = results.bins_theta, bp = results.bins_phi;
    std::vector<std::int64_t> counts(static_cast<size_t>(bt) * bp, 0);
    for (size_t j = 0; j < theta.size(); ++j) {
      int a = std::clamp(static_cast<int>((theta[j] + kPi) / (2.0 * kPi) * bt), 0,
                         bt - 1);
      int b = std::clamp(static_cast<int>(phi[j] / kPi * bp), 0, bp - 1);
      ++counts[static_cast<size_t>(a) * bp + b];
    }
    io::Table h;
    char sbuf[32];
    std::snprintf(sbuf, sizeof sbuf, "%.17g", results.slices[i].s);
    h.metadata = {{"s", sbuf},
                  {"bins", std::to_string(bt) + "x" + std::to_string(bp)}};
    h.columns = {"theta_bin", "phi_bin", "count"};
    for (int a = 0; a < bt; ++a)
      for (int b = 0; b < bp; ++b)
        h.rows.push_back({static_cast<double>(a), static_cast<double>(b),
                          static_cast<double>(counts[static_cast<size_t>(a) * bp + b])});
    io::write_table(outdir / ("hist2d_" + std::to_string(i) + ".tsv"), h);
  }
}

void write_path_dump(const fs::path& file, const std::vector<double>& s,
                     const std::vector<std::array<double, 3>>& y) {
  if (s.size() != y.size())
    throw std::invalid_argument("write_path_dump: length mismatch");
  std::string bytes;
  bytes.reserve(24 + s.size() * 32);
  bytes.append("LFPATH01", 8);
  auto put = [&bytes](const void* p, size_t n) {
    bytes.append(reinterpret_cast<const char*>(p), n);
  };
  std::uint64_t count = s.size();
  std::uint32_t fields = 4, reserved = 0;
  put(&count, 8);
  put(&fields, 4);
  put(&reserved, 4);
  for (size_t i = 0; i < s.size(); ++i) {
    double rec[4] = {s[i], y[i][0], y[i][1], y[i][2]};
    put(rec, sizeof rec);
  }
  io::atomic_write(file, bytes);
}

PathDump read_path_dump(const fs::path& file) {
  std::string bytes = io::read_file(file);
  if (bytes.size() < 24 || bytes.compare(0, 8, "LFPATH01") != 0)
    throw std::runtime_error("path dump: bad magic in " + file.string());
  std::uint64_t count = 0;
  std::uint32_t fields = 0;
  std::memcpy(&count, bytes.data() + 8, 8);
  std::memcpy(&fields, bytes.data() + 16, 4);
  if (fields != 4 || bytes.size() != 24 + count * 32)
    throw std::runtime_error("path dump: inconsistent header in " + file.string());
  PathDump d;
  d.s.resize(count);
  d.y.resize(count);
  const char* p = bytes.data() + 24;
  for (std::uint64_t i = 0; i < count; ++i) {
    double rec[4];
    std::memcpy(rec, p, sizeof rec);
    p += sizeof rec;
    d.s[i] = rec[0];
    d.y[i] = {rec[1], rec[2], rec[3]};
  }
  return d;
}

ResultManifest run_experiment(const RunConfig& config) {
  using Runner = void (*)(const RunConfig&, OutputSet&, ResultManifest&);
  static const std::map<std::string, Runner> runners = {
      {"sample-loops", run_sample_loops},
      {"evolve-nls", run_evolve_nls},
      {"simulate-frames", run_simulate_frames},
      {"analyze", run_analyze},
      {"jk", run_jk}};
  auto it = runners.find(config.command);
  if (it == runners.end())
    throw ConfigError("unknown command '" + config.command + "'");

  const auto start = std::chrono::steady_clock::now();
  ResultManifest m;
  m.command = config.command;
  m.config_echo = config.kv;
  OutputSet out(config.outdir());
  it->second(config, out, m);
  const auto stop = std::chrono::steady_clock::now();
  m.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  out.finish(m);
  return m;
}

}  // namespace loopframe::harness
