// ffg command line: run experiment configs, validate them, solve the cat
// code sweet spot.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "ffg/harness.hpp"

namespace {

struct Overrides {
  int threads = 0;
  std::string out_dir;
  int n_fock = 0;
  int m_max = 0;
  int l_max = 0;

  void apply(ffg::harness::ExperimentConfig& config) const {
    if (threads > 0) config.threads = threads;
    if (n_fock > 0) config.params.n_fock = n_fock;
    if (m_max > 0) config.params.m_max = m_max;
    if (l_max > 0) config.params.l_max = l_max;
    if (!out_dir.empty()) {
      const std::filesystem::path base = config.output.empty()
                                             ? std::filesystem::path(experiment_name(config.experiment))
                                             : std::filesystem::path(config.output).filename();
      config.output = (std::filesystem::path(out_dir) / base).string();
    }
  }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--threads", ov.threads, "Worker threads for sweep points");
  cmd->add_option("--out", ov.out_dir, "Output directory (overrides config prefix directory)");
  cmd->add_option("--n-fock", ov.n_fock, "Fock truncation override");
  cmd->add_option("--m-max", ov.m_max, "Temporal truncation override");
  cmd->add_option("--l-max", ov.l_max, "Harmonic truncation override");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ffg - Floquet phase-space Hamiltonian engineering"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write <prefix>.csv/.meta.json");
  run_cmd->add_option("config", config_path, "JSON experiment config")->required();
  add_override_flags(run_cmd, ov);

  auto* val_cmd = app.add_subcommand("validate", "Validate an experiment config");
  val_cmd->add_option("config", config_path, "JSON experiment config")->required();

  double lo = 1.0, hi = 2.0;
  auto* ss_cmd = app.add_subcommand("sweet-spot", "Solve tan(a^2) = -tanh(a^2) inside a bracket");
  ss_cmd->add_option("--lo", lo, "Bracket lower edge")->capture_default_str();
  ss_cmd->add_option("--hi", hi, "Bracket upper edge")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto config = ffg::harness::load_config(config_path);
      ov.apply(config);
      const auto table = ffg::harness::run(config);
      std::printf("%s: %zu rows", experiment_name(config.experiment).c_str(), table.rows.size());
      if (!config.output.empty()) std::printf(" -> %s.csv", config.output.c_str());
      std::printf("\n");
      for (const auto& [key, value] : table.metadata.items()) {
        if (key == "config" || key == "code_version") continue;
        std::printf("  %s: %s\n", key.c_str(), value.dump().c_str());
      }
    } else if (val_cmd->parsed()) {
      const auto config = ffg::harness::load_config(config_path);
      std::printf("valid: %s\n", ffg::harness::config_to_json(config).dump().c_str());
    } else if (ss_cmd->parsed()) {
      const double root = ffg::harness::sweet_spot_solve(lo, hi);
      std::printf("alpha = %.12f\n", root);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
