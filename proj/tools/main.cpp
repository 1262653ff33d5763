// Command-line front end. Every experiment key can come from a config file
// (--config, lowest precedence) or a same-named flag; typed validation lives
// in the harness so both paths share it.

#include "loopframe/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace {

struct KeyHelp {
  const char* key;
  const char* help;
};

const std::vector<KeyHelp> kCommonKeys = {
    {"seed", "base RNG seed (required)"},
    {"out", "output directory (required)"},
    {"workers", "worker threads, 0 = hardware"},
};

const std::map<std::string, std::vector<KeyHelp>> kCommandKeys = {
    {"sample-loops",
     {{"modes", "Fourier truncation n, modes 1 <= |j| <= n"},
      {"proposals", "number of free-loop proposals"},
      {"lambda", "quartic tilt exponent"},
      {"K", "ball radius: keep proposals with h1 <= K"},
      {"beta", "quartic coupling used when reporting h3"}}},
    {"evolve-nls",
     {{"modes", "Fourier truncation n"},
      {"beta", "defocusing coupling"},
      {"dt", "step size"},
      {"steps", "number of steps"},
      {"initial", "sampler stream index, or a k/re/im table file"},
      {"record-every", "record invariants every k steps"}}},
    {"simulate-frames",
     {{"epsilon", "torsion regularization"},
      {"h", "step size"},
      {"T", "horizon"},
      {"paths", "number of independent paths"},
      {"record-every", "record angles every k steps (0 = endpoints)"},
      {"dump-paths", "write binary dumps for the first k paths"},
      {"dump-stride", "keep every k-th record in dumps"},
      {"periodic-extension", "1 = wrap the bridge past 2 pi"}}},
    {"analyze",
     {{"input", "frames_angles.tsv from simulate-frames"},
      {"bins-theta", "longitude bins for the contingency table"},
      {"bins-phi", "colatitude bins for the contingency table"}}},
    {"jk",
     {{"k", "order of the expansion"},
      {"alphas", "file of per-mode variances, whitespace separated"}}},
};

const std::map<std::string, const char*> kCommandHelp = {
    {"sample-loops", "draw a weighted Gibbs loop ensemble"},
    {"evolve-nls", "integrate the cubic flow and audit its invariants"},
    {"simulate-frames", "run moving-frame paths on the sphere"},
    {"analyze", "transport statistics of a frame ensemble"},
    {"jk", "expand the k-point ensemble average"},
};

struct SubState {
  CLI::App* sub = nullptr;
  std::string config_file;
  std::map<std::string, std::string> values;  // node addresses are stable
  std::vector<std::string> keys;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loop ensembles, frame transport, and their statistics"};
  app.require_subcommand(1);

  std::map<std::string, SubState> states;
  for (const auto& [name, keys] : kCommandKeys) {
    SubState& st = states[name];
    st.sub = app.add_subcommand(name, kCommandHelp.at(name));
    // Flags mirror config keys verbatim; freeing -h lets --h name a step size.
    st.sub->set_help_flag("--help", "print help");
    st.sub->add_option("--config", st.config_file,
                       "config file of key value lines; flags override");
    for (const auto& [key, help] : kCommonKeys) {
      st.keys.push_back(key);
      st.sub->add_option("--" + std::string(key), st.values[key], help);
    }
    for (const auto& [key, help] : keys) {
      st.keys.push_back(key);
      st.sub->add_option("--" + std::string(key), st.values[key], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  loopframe::harness::RunConfig cfg;
  try {
    for (auto& [name, st] : states) {
      if (!st.sub->parsed()) continue;
      cfg.command = name;
      if (st.sub->count("--config"))
        cfg.kv = loopframe::harness::parse_config_file(st.config_file);
      for (const auto& key : st.keys)
        if (st.sub->count("--" + key)) cfg.kv[key] = st.values.at(key);
    }
    auto manifest = loopframe::harness::run_experiment(cfg);
    std::printf("%s: %zu outputs in %s, combined %016llx, %.1f ms\n",
                manifest.command.c_str(), manifest.outputs.size(),
                cfg.require("out").c_str(),
                static_cast<unsigned long long>(manifest.combined_hash),
                manifest.wall_ms);
    return 0;
  } catch (const loopframe::harness::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
