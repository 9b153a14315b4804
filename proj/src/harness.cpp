#include "ffg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "ffg/analytic_example.hpp"

namespace ffg::harness {

using json = nlohmann::json;
using linalg::CMat;
using linalg::CVec;

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::spectrum: return "spectrum";
    case Experiment::q_chart: return "q_chart";
    case Experiment::correction_scan: return "correction_scan";
    case Experiment::t0_scan: return "t0_scan";
    case Experiment::micromotion_scan: return "micromotion_scan";
    case Experiment::cat_infidelity: return "cat_infidelity";
    case Experiment::sweet_spot: return "sweet_spot";
  }
  throw std::logic_error("experiment_name: unreachable");
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::spectrum, Experiment::q_chart, Experiment::correction_scan,
                       Experiment::t0_scan, Experiment::micromotion_scan, Experiment::cat_infidelity,
                       Experiment::sweet_spot}) {
    if (experiment_name(e) == name) return e;
  }
  throw std::invalid_argument(
      "experiment: unknown value '" + name +
      "' (expected one of spectrum, q_chart, correction_scan, t0_scan, micromotion_scan, "
      "cat_infidelity, sweet_spot)");
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v(points);
  if (log) {
    const double l0 = std::log(start), l1 = std::log(stop);
    for (int i = 0; i < points; ++i) v[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
  } else {
    for (int i = 0; i < points; ++i) v[i] = start + (stop - start) * i / (points - 1);
  }
  return v;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (target != "mono" && target != "cat")
    throw std::invalid_argument("target: must be 'mono' or 'cat'");
  if (order_max < 0 || order_max > 2) throw std::invalid_argument("order_max: must be 0, 1 or 2");
  if (t_points < 2) throw std::invalid_argument("t_points: must be >= 2");
  if (grid_points < 2) throw std::invalid_argument("grid_points: must be >= 2");
  if (threads < 1) throw std::invalid_argument("threads: must be >= 1");
  if (steps.min_steps < 64) throw std::invalid_argument("steps.min: must be >= 64");
  if (steps.tol <= 0.0) throw std::invalid_argument("steps.tol: must be > 0");

  const bool needs_sweep = experiment == Experiment::correction_scan ||
                           experiment == Experiment::t0_scan ||
                           experiment == Experiment::cat_infidelity;
  if (needs_sweep) {
    if (sweep.points < 2) throw std::invalid_argument("sweep.points: must be >= 2");
    if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop))
      throw std::invalid_argument("sweep: bounds must be finite");
    if (sweep.log && (sweep.start <= 0.0 || sweep.stop <= 0.0))
      throw std::invalid_argument("sweep: log spacing requires positive bounds");
    if (sweep.variable.empty()) throw std::invalid_argument("sweep.variable: required");
  }
  if (experiment == Experiment::sweet_spot && !(bracket_lo < bracket_hi))
    throw std::invalid_argument("bracket: need lo < hi");
}

namespace {

template <typename T>
T field(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config field '" + key + "': " + e.what());
  }
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (!j.contains("experiment")) throw std::invalid_argument("config: missing 'experiment'");
  c.experiment = experiment_from_name(j.at("experiment").get<std::string>());
  c.target = field<std::string>(j, "target", c.experiment == Experiment::cat_infidelity ? "cat" : "mono");

  const json jp = j.contains("params") ? j.at("params") : json::object();
  c.params.lambda = field(jp, "lambda", c.params.lambda);
  c.params.omega = field(jp, "omega", c.params.omega);
  c.params.n_sym = field(jp, "n_sym", c.params.n_sym);
  c.params.beta = field(jp, "beta", c.params.beta);
  c.params.t0 = field(jp, "t0", c.params.t0);
  // truncation default depends on the run family: 60 for the monochromatic
  // example, 120 for cat-lattice runs
  c.params.n_fock = field(jp, "n_fock", c.target == "cat" ? 120 : 60);
  c.params.q_fold = field(jp, "q_fold", c.params.q_fold);
  c.params.alpha0 = field(jp, "alpha0", c.params.alpha0);
  c.params.gamma = field(jp, "gamma", c.params.gamma);
  c.params.l_max = field(jp, "l_max", c.params.l_max);
  c.params.m_max = field(jp, "m_max", c.params.m_max);
  c.params.k_nodes = field(jp, "k_nodes", c.params.k_nodes);
  c.params.k_max = field(jp, "k_max", c.params.k_max);
  c.params.tau_grid = field(jp, "tau_grid", c.params.tau_grid);

  // per-experiment sweep defaults, overridden by an explicit "sweep" object
  switch (c.experiment) {
    case Experiment::correction_scan: c.sweep = {"beta", 0.05, 0.6, 12, false}; break;
    case Experiment::cat_infidelity: c.sweep = {"beta", 0.02, 0.2, 12, true}; break;
    case Experiment::t0_scan: c.sweep = {"t0", 0.0, 0.875 * c.params.period(), 8, false}; break;
    default: break;
  }
  if (j.contains("sweep")) {
    const json& js = j.at("sweep");
    c.sweep.variable = field<std::string>(js, "variable", c.sweep.variable);
    c.sweep.start = field(js, "start", c.sweep.start);
    c.sweep.stop = field(js, "stop", c.sweep.stop);
    c.sweep.points = field(js, "points", c.sweep.points);
    c.sweep.log = field(js, "log", c.sweep.log);
  }
  c.output = field<std::string>(j, "output", "");
  c.order_max = field(j, "order_max", 1);
  c.t_points = field(j, "t_points", 64);
  c.grid_points = field(j, "grid_points", 61);
  c.r_max = field(j, "r_max", 6.0);
  c.solve_sweet_spot = field(j, "sweet_spot", false);
  c.bracket_lo = field(j, "bracket_lo", 1.0);
  c.bracket_hi = field(j, "bracket_hi", 2.0);
  if (j.contains("steps")) {
    const json& js = j.at("steps");
    c.steps.min_steps = field(js, "min", 64);
    c.steps.tol = field(js, "tol", 1e-9);
    c.steps.max_steps = field(js, "max", 1 << 14);
  }
  c.threads = field(j, "threads", 1);
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["target"] = c.target;
  j["params"] = {{"lambda", c.params.lambda},   {"omega", c.params.omega},
                 {"n_sym", c.params.n_sym},     {"beta", c.params.beta},
                 {"t0", c.params.t0},           {"n_fock", c.params.n_fock},
                 {"q_fold", c.params.q_fold},   {"alpha0", c.params.alpha0},
                 {"gamma", c.params.gamma},     {"l_max", c.params.l_max},
                 {"m_max", c.params.m_max},     {"k_nodes", c.params.k_nodes},
                 {"k_max", c.params.k_max},     {"tau_grid", c.params.tau_grid}};
  j["sweep"] = {{"variable", c.sweep.variable},
                {"start", c.sweep.start},
                {"stop", c.sweep.stop},
                {"points", c.sweep.points},
                {"log", c.sweep.log}};
  j["output"] = c.output;
  j["order_max"] = c.order_max;
  j["t_points"] = c.t_points;
  j["grid_points"] = c.grid_points;
  j["r_max"] = c.r_max;
  j["sweet_spot"] = c.solve_sweet_spot;
  j["bracket_lo"] = c.bracket_lo;
  j["bracket_hi"] = c.bracket_hi;
  j["steps"] = {{"min", c.steps.min_steps}, {"tol", c.steps.tol}, {"max", c.steps.max_steps}};
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void write_csv(const ResultTable& table, std::ostream& os) {
  os << "# config " << table.metadata.at("config").dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
  char buf[48];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      os << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

double sweet_spot_solve(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("sweet_spot_solve: need lo < hi");
  auto g = [](double a) { return std::tan(a * a) + std::tanh(a * a); };
  const int scan = 512;
  for (int i = 0; i < scan; ++i) {
    double a = lo + (hi - lo) * i / scan;
    double b = lo + (hi - lo) * (i + 1) / scan;
    double ga = g(a), gb = g(b);
    if (!(ga * gb < 0.0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      const double gm = g(mid);
      if (ga * gm <= 0.0) {
        b = mid;
        gb = gm;
      } else {
        a = mid;
        ga = gm;
      }
      if (b - a < 1e-12) break;
    }
    const double root = 0.5 * (a + b);
    // tan poles also produce sign changes; the residual check rejects them
    if (std::abs(g(root)) <= 1e-9) return root;
  }
  throw std::runtime_error("sweet_spot_solve: no root with |g| <= 1e-9 inside bracket");
}

// ---------------------------------------------------------------------------
// experiment helpers

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct TrackedTargets {
  std::vector<std::string> labels; // 0, I, Ip, 0p
  std::vector<double> energies;
  std::vector<CVec> vectors;
};

// Lowest two and highest two eigenpairs of the RWA target.
TrackedTargets mono_targets(const SystemParams& p) {
  const CMat h = mono::rwa_target(p, p.n_fock);
  const auto sol = linalg::eigh(h);
  const int n = p.n_fock;
  TrackedTargets t;
  t.labels = {"0", "I", "Ip", "0p"};
  for (int idx : {0, 1, n - 2, n - 1}) {
    t.energies.push_back(sol.values(idx));
    t.vectors.push_back(sol.vectors.col(idx));
  }
  return t;
}

// Condensed per-point quasienergy data: folded energies + mode snapshots.
struct SnapshotSet {
  Eigen::VectorXd epsilon;
  CMat snapshots; // n_fock x dim, columns Phi_alpha(t_snap)
};

SnapshotSet snapshot_set(const floquet::QuasienergySolution& sol, double t) {
  SnapshotSet s;
  s.epsilon = sol.epsilon;
  s.snapshots.resize(sol.n_fock, sol.dim());
  for (int a = 0; a < sol.dim(); ++a) s.snapshots.col(a) = sol.micromotion(a, t).amp;
  return s;
}

struct TrackResult {
  std::vector<int> modes;
  std::vector<double> d_eps;
  std::vector<double> fidelity;
};

// Match tracked levels against reference states (targets or the previous
// sweep point), then measure deviation and fidelity against the targets.
TrackResult track(const SnapshotSet& s, const std::vector<CVec>& reference,
                  const TrackedTargets& targets, double zone) {
  TrackResult r;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    int best = 0;
    double best_ov = -1.0;
    const CVec ov = s.snapshots.adjoint() * reference[k];
    for (int a = 0; a < ov.size(); ++a)
      if (std::abs(ov(a)) > best_ov) {
        best_ov = std::abs(ov(a));
        best = a;
      }
    r.modes.push_back(best);
    r.d_eps.push_back(floquet::fold_quasienergy(s.epsilon(best) - targets.energies[k], zone));
    r.fidelity.push_back(std::abs(s.snapshots.col(best).dot(targets.vectors[k])));
  }
  return r;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::runtime_error("fit_loglog_slope: fewer than two positive points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double cat_q_exact(const SystemParams& p, double x, double pp) {
  const double s2 = 1.0 / (1.0 - std::exp(-2.0 * p.gamma));
  const int q = p.q_fold;
  const double amag = p.alpha0 * std::exp(p.gamma);
  const cplx aq = std::pow(cplx(x, pp) / std::sqrt(2.0 * p.lambda), q) -
                  std::pow(cplx(p.alpha0, 0.0), q) * std::exp(q * p.gamma);
  return p.beta / std::pow(amag, 2 * q) * std::exp(-(x * x + pp * pp) / (2.0 * p.lambda * s2)) *
         std::norm(aq);
}

ResultTable run_spectrum(const ExperimentConfig& c) {
  const auto& p = c.params;
  const CMat h = (c.target == "cat")
                     ? fock::cat_target_operator(p.q_fold, p.alpha0, p.gamma, p.beta, p.n_fock)
                     : mono::rwa_target(p, p.n_fock);
  const auto sol = linalg::eigh(h);
  ResultTable t;
  t.columns = {"index", "energy"};
  for (int i = 0; i < p.n_fock; ++i) t.rows.push_back({static_cast<double>(i), sol.values(i)});
  double pairing = 0.0;
  if (c.target == "mono")
    for (int i = 0; i < p.n_fock; ++i)
      pairing = std::max(pairing, std::abs(sol.values(i) + sol.values(p.n_fock - 1 - i)));
  t.metadata["spectrum_pairing_residual"] = pairing;
  return t;
}

ResultTable run_q_chart(const ExperimentConfig& c) {
  const auto& p = c.params;
  ResultTable t;
  t.columns = {"x", "p", "q_value", "q_closed_form"};
  const CMat h = (c.target == "cat")
                     ? fock::cat_target_operator(p.q_fold, p.alpha0, p.gamma, p.beta, p.n_fock)
                     : mono::rwa_target(p, p.n_fock);
  for (int i = 0; i < c.grid_points; ++i) {
    const double x = -c.r_max + 2.0 * c.r_max * i / (c.grid_points - 1);
    for (int j = 0; j < c.grid_points; ++j) {
      const double pp = -c.r_max + 2.0 * c.r_max * j / (c.grid_points - 1);
      const double q_fock = fock::qfunction_point(h, x, pp, p).real();
      const double q_exact = (c.target == "cat")
                                 ? cat_q_exact(p, x, pp)
                                 : mono::rwa_q_exact(p, std::hypot(x, pp), std::atan2(pp, x));
      t.rows.push_back({x, pp, q_fock, q_exact});
    }
  }
  return t;
}

ResultTable run_correction_scan(const ExperimentConfig& c) {
  const auto betas = c.sweep.values();
  const int n = static_cast<int>(betas.size());
  // rwa_target is proportional to beta: eigenvectors are shared across the
  // sweep and the tracked energies scale linearly
  SystemParams punit = c.params;
  punit.beta = 1.0;
  const TrackedTargets unit_targets = mono_targets(punit);
  const double zone = c.params.lambda * c.params.omega;

  std::vector<SnapshotSet> orig(n), corr(n);
  parallel_for(n, c.threads, [&](int i) {
    SystemParams p = c.params;
    p.beta = betas[i];
    const ncft::NcftCoefficient target(ncft::ncft_monochromatic(p));
    magnus::DriveStack stack0;
    stack0.orders.push_back(target);
    orig[i] = snapshot_set(floquet::quasienergy_solve(stack0, p.m_max, p), p.t0);
    const magnus::DriveStack stack1 = magnus::correction_loop(target, c.order_max, p);
    corr[i] = snapshot_set(floquet::quasienergy_solve(stack1, p.m_max, p), p.t0);
  });

  ResultTable t;
  t.columns = {"beta"};
  for (const auto& lbl : unit_targets.labels) t.columns.push_back("dE_orig_" + lbl);
  for (const auto& lbl : unit_targets.labels) t.columns.push_back("dE_1st_" + lbl);
  for (const auto& lbl : unit_targets.labels) t.columns.push_back("F_orig_" + lbl);
  for (const auto& lbl : unit_targets.labels) t.columns.push_back("F_1st_" + lbl);

  // Track levels sequentially: reference states follow the previous sweep
  // point to dodge branch swaps at level crossings.
  std::vector<CVec> ref_orig = unit_targets.vectors, ref_corr = unit_targets.vectors;
  for (int i = 0; i < n; ++i) {
    TrackedTargets targets = unit_targets;
    for (double& e : targets.energies) e *= betas[i];
    const TrackResult ro = track(orig[i], ref_orig, targets, zone);
    const TrackResult rc = track(corr[i], ref_corr, targets, zone);
    for (std::size_t k = 0; k < targets.vectors.size(); ++k) {
      ref_orig[k] = orig[i].snapshots.col(ro.modes[k]);
      ref_corr[k] = corr[i].snapshots.col(rc.modes[k]);
    }
    std::vector<double> row{betas[i]};
    for (double v : ro.d_eps) row.push_back(v);
    for (double v : rc.d_eps) row.push_back(v);
    for (double v : ro.fidelity) row.push_back(v);
    for (double v : rc.fidelity) row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ResultTable run_t0_scan(const ExperimentConfig& c) {
  const auto t0s = c.sweep.values();
  const int n = static_cast<int>(t0s.size());
  const TrackedTargets targets = mono_targets(c.params);
  const double zone = c.params.lambda * c.params.omega;

  // The uncorrected drive does not depend on t0; only the snapshot time does.
  SystemParams p0 = c.params;
  const ncft::NcftCoefficient target0(ncft::ncft_monochromatic(p0));
  magnus::DriveStack stack0;
  stack0.orders.push_back(target0);
  const floquet::QuasienergySolution sol0 = floquet::quasienergy_solve(stack0, p0.m_max, p0);

  std::vector<SnapshotSet> orig(n), corr(n);
  parallel_for(n, c.threads, [&](int i) {
    SystemParams p = c.params;
    p.t0 = t0s[i];
    orig[i] = snapshot_set(sol0, p.t0);
    const ncft::NcftCoefficient target(ncft::ncft_monochromatic(p));
    const magnus::DriveStack stack1 = magnus::correction_loop(target, c.order_max, p);
    corr[i] = snapshot_set(floquet::quasienergy_solve(stack1, p.m_max, p), p.t0);
  });

  ResultTable t;
  t.columns = {"t0"};
  for (const auto& lbl : targets.labels) t.columns.push_back("F_orig_" + lbl);
  for (const auto& lbl : targets.labels) t.columns.push_back("F_1st_" + lbl);
  for (int i = 0; i < n; ++i) {
    const TrackResult ro = track(orig[i], targets.vectors, targets, zone);
    const TrackResult rc = track(corr[i], targets.vectors, targets, zone);
    std::vector<double> row{t0s[i]};
    for (double v : ro.fidelity) row.push_back(v);
    for (double v : rc.fidelity) row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ResultTable run_micromotion_scan(const ExperimentConfig& c) {
  const SystemParams& p = c.params;
  const TrackedTargets targets = mono_targets(p);
  const ncft::NcftCoefficient target(ncft::ncft_monochromatic(p));
  const magnus::DriveStack stack = magnus::correction_loop(target, c.order_max, p);
  const floquet::QuasienergySolution sol = floquet::quasienergy_solve(stack, p.m_max, p);

  const auto match = floquet::match_levels(sol, targets.vectors, p.t0);

  ResultTable t;
  t.columns = {"t"};
  for (const auto& lbl : targets.labels) t.columns.push_back("F_" + lbl);
  std::vector<int> argmax(targets.labels.size(), 0);
  std::vector<double> fmax(targets.labels.size(), -1.0);
  for (int j = 0; j < c.t_points; ++j) {
    const double time = p.period() * j / c.t_points;
    std::vector<double> row{time};
    for (std::size_t k = 0; k < targets.labels.size(); ++k) {
      const fock::FockState phi = sol.micromotion(match[k].mode, time);
      const double f = std::abs(phi.amp.dot(targets.vectors[k]));
      if (f > fmax[k]) {
        fmax[k] = f;
        argmax[k] = j;
      }
      row.push_back(f);
    }
    t.rows.push_back(std::move(row));
  }
  int nearest = 0;
  double dbest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < c.t_points; ++j) {
    const double d = std::abs(p.period() * j / c.t_points - p.t0);
    if (d < dbest) {
      dbest = d;
      nearest = j;
    }
  }
  t.metadata["argmax_index"] = argmax;
  t.metadata["t0_index"] = nearest;
  return t;
}

ResultTable run_cat_infidelity(const ExperimentConfig& c) {
  const auto betas = c.sweep.values();
  const int n = static_cast<int>(betas.size());

  SystemParams base = c.params;
  if (c.solve_sweet_spot) {
    const double alpha_star = sweet_spot_solve(c.bracket_lo, c.bracket_hi);
    base.alpha0 = alpha_star * std::exp(-base.gamma);
  }
  const cplx alpha_cat = base.alpha0 * std::exp(base.gamma);

  std::vector<CVec> cats;
  for (int s = 0; s < base.q_fold; ++s)
    cats.push_back(fock::cat_state(base.q_fold, s, alpha_cat, base.n_fock).amp);

  struct Row {
    double if0, if1, conv0, conv1;
  };
  std::vector<Row> rows(n);
  parallel_for(n, c.threads, [&](int i) {
    SystemParams p = base;
    p.beta = betas[i];
    const ncft::NcftCoefficient target(ncft::ncft_cat_lattice(p.q_fold, p.alpha0, p.gamma, p));
    magnus::DriveStack stack0;
    stack0.orders.push_back(target);
    const magnus::DriveStack stack1 = magnus::correction_loop(target, c.order_max, p);

    auto infidelity = [&](const magnus::DriveStack& stack, double& conv) {
      const auto harm = magnus::extract_harmonics(stack, p.l_max, p);
      const auto prop = floquet::propagate_states(harm, 0.0, p, cats, c.steps.min_steps,
                                                  c.steps.tol, c.steps.max_steps);
      conv = prop.convergence;
      double f = 0.0;
      for (std::size_t s = 0; s < cats.size(); ++s) f += std::abs(cats[s].dot(prop.states[s]));
      return 1.0 - f / cats.size();
    };
    rows[i].if0 = infidelity(stack0, rows[i].conv0);
    rows[i].if1 = infidelity(stack1, rows[i].conv1);
  });

  ResultTable t;
  t.columns = {"beta", "if_0th", "if_1st", "conv_0th", "conv_1st"};
  std::vector<double> if0(n), if1(n);
  for (int i = 0; i < n; ++i) {
    if0[i] = rows[i].if0;
    if1[i] = rows[i].if1;
    t.rows.push_back({betas[i], rows[i].if0, rows[i].if1, rows[i].conv0, rows[i].conv1});
  }
  t.metadata["slope_0th"] = fit_loglog_slope(betas, if0);
  t.metadata["slope_1st"] = fit_loglog_slope(betas, if1);
  t.metadata["alpha_cat"] = std::abs(alpha_cat);
  return t;
}

ResultTable run_sweet_spot(const ExperimentConfig& c) {
  const double root = sweet_spot_solve(c.bracket_lo, c.bracket_hi);
  ResultTable t;
  t.columns = {"alpha", "residual"};
  t.rows.push_back({root, std::tan(root * root) + std::tanh(root * root)});
  return t;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

} // namespace

ResultTable run(const ExperimentConfig& config) {
  config.validate();
  ResultTable table;
  switch (config.experiment) {
    case Experiment::spectrum: table = run_spectrum(config); break;
    case Experiment::q_chart: table = run_q_chart(config); break;
    case Experiment::correction_scan: table = run_correction_scan(config); break;
    case Experiment::t0_scan: table = run_t0_scan(config); break;
    case Experiment::micromotion_scan: table = run_micromotion_scan(config); break;
    case Experiment::cat_infidelity: table = run_cat_infidelity(config); break;
    case Experiment::sweet_spot: table = run_sweet_spot(config); break;
  }
  table.metadata["config"] = config_to_json(config);
  table.metadata["code_version"] = "ffg 1.0.0";

  if (!config.output.empty()) {
    const std::filesystem::path prefix(config.output);
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    {
      std::ofstream csv(config.output + ".csv");
      if (!csv) throw std::runtime_error("cannot write " + config.output + ".csv");
      write_csv(table, csv);
    }
    {
      json meta = table.metadata;
      meta["timestamp"] = iso_timestamp();
      meta["rows"] = table.rows.size();
      std::ofstream mj(config.output + ".meta.json");
      if (!mj) throw std::runtime_error("cannot write " + config.output + ".meta.json");
      mj << meta.dump(2) << "\n";
    }
  }
  return table;
}

} // namespace ffg::harness
