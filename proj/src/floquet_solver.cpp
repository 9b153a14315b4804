#include "ffg/floquet_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace ffg::floquet {

double fold_quasienergy(double eps, double zone) {
  double r = std::fmod(eps + zone / 2.0, zone);
  if (r <= 0.0) r += zone;
  return r - zone / 2.0;
}

double fold_distance(double a, double b, double zone) {
  const double d = std::abs(fold_quasienergy(a - b, zone));
  return std::min(d, zone - d);
}

fock::FockState QuasienergySolution::micromotion(int alpha, double t) const {
  if (alpha < 0 || alpha >= dim()) throw std::invalid_argument("micromotion: mode index out of range");
  CVec phi = CVec::Zero(n_fock);
  for (int M = -m_max; M <= m_max; ++M) {
    const cplx ph = std::exp(I * static_cast<double>(M) * omega * t);
    phi += ph * modes.col(alpha).segment(static_cast<Eigen::Index>(M + m_max) * n_fock, n_fock);
  }
  fock::FockState s;
  s.tail = std::norm(phi(n_fock - 1));
  s.amp = phi / phi.norm();
  return s;
}

QuasienergySolution quasienergy_solve(const magnus::HarmonicSet& h, int m_max, const SystemParams& p) {
  if (m_max < 1) throw std::invalid_argument("quasienergy_solve: m_max must be >= 1");
  const int nf = h.dim();
  const int blocks = 2 * m_max + 1;
  const long dim = static_cast<long>(nf) * blocks;
  if (dim > 20000) throw std::invalid_argument("quasienergy_solve: composite dimension exceeds 20000");

  CMat k = CMat::Zero(dim, dim);
  for (int Mb = -m_max; Mb <= m_max; ++Mb) {
    const long col0 = static_cast<long>(Mb + m_max) * nf;
    // free part: lambda [ (1 - Omega) m + M Omega ]
    for (int m = 0; m < nf; ++m)
      k(col0 + m, col0 + m) = p.lambda * ((1.0 - p.omega) * m + Mb * p.omega);
    for (int Nb = -m_max; Nb <= m_max; ++Nb) {
      const int l = Nb - Mb;
      if (std::abs(l) > h.l_max()) continue;
      const long row0 = static_cast<long>(Nb + m_max) * nf;
      k.block(row0, col0, nf, nf) += h.at(l);
    }
  }

  const auto sol = linalg::eigh(k, 1e-10);
  QuasienergySolution out;
  out.epsilon_raw = sol.values;
  out.epsilon.resize(dim);
  const double zone = p.lambda * p.omega;
  for (long i = 0; i < dim; ++i) out.epsilon(i) = fold_quasienergy(sol.values(i), zone);
  out.modes = sol.vectors;
  out.n_fock = nf;
  out.m_max = m_max;
  out.lambda = p.lambda;
  out.omega = p.omega;
  return out;
}

QuasienergySolution quasienergy_solve(const magnus::DriveStack& stack, int m_max, const SystemParams& p) {
  return quasienergy_solve(magnus::extract_harmonics(stack, p.l_max, p), m_max, p);
}

QuasienergySolution quasienergy_solve(const ncft::NcftCoefficient& f, int m_max, const SystemParams& p) {
  return quasienergy_solve(magnus::extract_harmonics(f, p.l_max, p), m_max, p);
}

namespace {

CMat midpoint_product(const magnus::HarmonicSet& h, double t0, const SystemParams& p, int steps) {
  const int nf = h.dim();
  const double dt = p.period() / steps;
  CMat u = CMat::Identity(nf, nf);
  for (int j = 0; j < steps; ++j) {
    const double tm = t0 + (j + 0.5) * dt;
    const CMat a = (-I * dt / p.lambda) * h.assemble(tm, p.omega);
    u = linalg::expm(a) * u;
  }
  return u;
}

} // namespace

PropagatorResult propagator(const magnus::HarmonicSet& h, double t0, const SystemParams& p,
                            int min_steps, double tol, int max_steps) {
  if (min_steps < 64) throw std::invalid_argument("propagator: steps must be >= 64");
  PropagatorResult res;
  CMat prev = midpoint_product(h, t0, p, min_steps);
  int steps = min_steps;
  res.convergence = std::numeric_limits<double>::infinity();
  while (steps < max_steps) {
    steps *= 2;
    CMat cur = midpoint_product(h, t0, p, steps);
    res.convergence = linalg::max_abs(cur - prev);
    prev = std::move(cur);
    if (res.convergence <= tol) {
      res.converged = true;
      break;
    }
  }
  res.unitary = std::move(prev);
  res.step_count = steps;

  const CMat gram = linalg::trusted_block(res.unitary.adjoint() * res.unitary -
                                          CMat::Identity(h.dim(), h.dim()));
  if (linalg::max_abs(gram) > 1e-9)
    throw std::runtime_error("propagator: unitarity violated on the trusted block");
  return res;
}

PropagatorResult propagator(const magnus::DriveStack& stack, double t0, const SystemParams& p,
                            int min_steps, double tol, int max_steps) {
  return propagator(magnus::extract_harmonics(stack, p.l_max, p), t0, p, min_steps, tol, max_steps);
}

StatePropagation propagate_states(const magnus::HarmonicSet& h, double t0, const SystemParams& p,
                                  const std::vector<CVec>& initial, int min_steps, double tol,
                                  int max_steps) {
  if (min_steps < 64) throw std::invalid_argument("propagate_states: steps must be >= 64");
  auto run = [&](int steps) {
    const double dt = p.period() / steps;
    std::vector<CVec> st = initial;
    for (int j = 0; j < steps; ++j) {
      const double tm = t0 + (j + 0.5) * dt;
      const CMat a = (-I * dt / p.lambda) * h.assemble(tm, p.omega);
      for (auto& v : st) v = linalg::expm_apply(a, v);
    }
    return st;
  };

  StatePropagation res;
  std::vector<CVec> prev = run(min_steps);
  int steps = min_steps;
  res.convergence = std::numeric_limits<double>::infinity();
  while (steps < max_steps) {
    steps *= 2;
    std::vector<CVec> cur = run(steps);
    double diff = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      diff = std::max(diff, (cur[i] - prev[i]).cwiseAbs().maxCoeff());
    res.convergence = diff;
    prev = std::move(cur);
    if (diff <= tol) {
      res.converged = true;
      break;
    }
  }
  res.states = std::move(prev);
  res.step_count = steps;
  return res;
}

Eigen::VectorXd propagator_quasienergies(const CMat& unitary, const SystemParams& p) {
  Eigen::ComplexEigenSolver<CMat> solver(unitary, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("propagator_quasienergies: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  Eigen::VectorXd eps(ev.size());
  const double zone = p.lambda * p.omega;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    eps(i) = fold_quasienergy(-p.lambda / p.period() * std::arg(ev(i)), zone);
  std::sort(eps.data(), eps.data() + eps.size());
  return eps;
}

double fidelity_cats(const CMat& unitary, int q, cplx alpha, int n_fock) {
  double f = 0.0;
  for (int s = 0; s < q; ++s) {
    const fock::FockState psi = fock::cat_state(q, s, alpha, n_fock);
    f += std::abs(psi.amp.dot(unitary * psi.amp));
  }
  return f / q;
}

double state_fidelity(const fock::FockState& a, const fock::FockState& b) {
  if (a.amp.size() != b.amp.size()) throw std::invalid_argument("state_fidelity: dimension mismatch");
  return std::abs(a.amp.dot(b.amp));
}

std::vector<double> amplitude_profile_delta(const fock::FockState& a, const fock::FockState& b) {
  if (a.amp.size() != b.amp.size())
    throw std::invalid_argument("amplitude_profile_delta: dimension mismatch");
  std::vector<double> d(a.amp.size());
  for (Eigen::Index m = 0; m < a.amp.size(); ++m) d[m] = std::abs(a.amp(m)) - std::abs(b.amp(m));
  return d;
}

std::vector<LevelMatch> match_levels(const QuasienergySolution& sol, const std::vector<CVec>& targets,
                                     double t) {
  // Snapshot every mode once, then pick the best overlap per target.
  const int dim = sol.dim();
  CMat snaps(sol.n_fock, dim);
  for (int a = 0; a < dim; ++a) snaps.col(a) = sol.micromotion(a, t).amp;

  std::vector<LevelMatch> out;
  out.reserve(targets.size());
  for (const auto& tv : targets) {
    LevelMatch best;
    const CVec ov = snaps.adjoint() * tv;
    for (int a = 0; a < dim; ++a) {
      const double o = std::abs(ov(a));
      if (o > best.overlap) {
        best.overlap = o;
        best.mode = a;
      }
    }
    out.push_back(best);
  }
  return out;
}

} // namespace ffg::floquet
