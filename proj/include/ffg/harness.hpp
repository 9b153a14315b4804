#pragma once

// Experiment front-end: configs, sweeps, and plot-ready data files.

#include <string>
#include <vector>

#include "json.hpp"

#include "ffg/floquet_solver.hpp"

namespace ffg::harness {

enum class Experiment {
  spectrum,
  q_chart,
  correction_scan,
  t0_scan,
  micromotion_scan,
  cat_infidelity,
  sweet_spot,
};

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct SweepSpec {
  std::string variable; // "beta" or "t0"
  double start = 0.0;
  double stop = 0.0;
  int points = 2;
  bool log = false;

  std::vector<double> values() const;
};

struct PropagatorSettings {
  int min_steps = 64;
  double tol = 1e-9;
  int max_steps = 1 << 14;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::spectrum;
  SystemParams params;
  std::string target = "mono"; // "mono" | "cat"
  SweepSpec sweep;
  std::string output;  // path prefix; empty = no files
  int order_max = 1;   // correction order for corrected drives
  int t_points = 64;   // micromotion time grid
  int grid_points = 61; // q_chart grid resolution per axis
  double r_max = 6.0;   // q_chart radial extent
  bool solve_sweet_spot = false; // cat_infidelity: put alpha0 at the sweet spot
  double bracket_lo = 1.0; // sweet_spot experiment bracket
  double bracket_hi = 2.0;
  PropagatorSettings steps;
  int threads = 1;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c); // fully resolved (defaults included)
ExperimentConfig load_config(const std::string& path);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;
};

// Deterministic CSV body: "# config ..." comment, header, then rows.
void write_csv(const ResultTable& table, std::ostream& os);

// Runs the experiment; when config.output is nonempty writes
// <output>.csv and <output>.meta.json.
ResultTable run(const ExperimentConfig& config);

// Smallest root of tan(a^2) + tanh(a^2) = 0 inside [lo, hi] by bracketed
// bisection on a sign-change scan; tan poles are rejected through the
// residual check |g| <= 1e-9.
double sweet_spot_solve(double lo, double hi);

} // namespace ffg::harness
