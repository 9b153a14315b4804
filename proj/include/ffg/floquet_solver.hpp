#pragma once

// Exact Floquet diagnostics: the composite Fock (x) temporal quasienergy
// eigenproblem, micromotion snapshots, the time-ordered one-period
// propagator, and fidelity metrics.

#include <vector>

#include "ffg/fockspace.hpp"
#include "ffg/magnus.hpp"

namespace ffg::floquet {

using linalg::CMat;
using linalg::CVec;

// Fold a quasienergy into the first zone (-lambda Omega/2, lambda Omega/2].
double fold_quasienergy(double eps, double zone);

// Circular distance of two folded quasienergies.
double fold_distance(double a, double b, double zone);

struct QuasienergySolution {
  Eigen::VectorXd epsilon_raw;    // composite-matrix eigenvalues, ascending
  Eigen::VectorXd epsilon;        // folded into (-zone/2, zone/2]
  CMat modes;                     // columns: c^{m,M}; row index (M+m_max)*N + m
  int n_fock = 0;
  int m_max = 0;
  double lambda = 1.0;
  double omega = 1.0;

  int dim() const { return n_fock * (2 * m_max + 1); }
  double zone() const { return lambda * omega; }

  // Micromotion snapshot Phi^m_alpha(t) = sum_M c^{m,M} e^{iM Omega t},
  // normalized (deviation from unit norm is a truncation diagnostic).
  fock::FockState micromotion(int alpha, double t) const;
};

// Composite-space quasienergy eigenproblem.  Matrix elements
//   <n,N_t| HH |m,M_t> = lambda[(omega0 - Omega) m + M_t Omega] delta
//                        + (V_{N_t - M_t})_{nm},  omega0 = 1,
// assembled from the drive harmonics, symmetrized and checked Hermitian to
// 1e-10, then solved densely.  Dimension N(2 m_max + 1) > 20000 is rejected.
QuasienergySolution quasienergy_solve(const magnus::HarmonicSet& h, int m_max, const SystemParams& p);
QuasienergySolution quasienergy_solve(const magnus::DriveStack& stack, int m_max, const SystemParams& p);
QuasienergySolution quasienergy_solve(const ncft::NcftCoefficient& f, int m_max, const SystemParams& p);

struct PropagatorResult {
  CMat unitary; // U(t0 + T, t0)
  int step_count = 0;
  double convergence = 0.0; // last successive max-entry difference
  bool converged = false;
};

// U(t0+T, t0) as a product of midpoint-sampled exponential slices
// (second-order accurate), doubling the step count from min_steps until two
// successive results differ by <= tol in max entry norm.  Hitting max_steps
// without convergence is reported through the converged flag.  Unitarity is
// enforced on the trusted block.
//
// The integrated Hamiltonian is the l_max-truncated harmonic representation
// -- the same operator the quasienergy eigenproblem diagonalizes, which is
// what makes the two methods cross-checkable.
PropagatorResult propagator(const magnus::HarmonicSet& h, double t0, const SystemParams& p,
                            int min_steps = 64, double tol = 1e-9, int max_steps = 1 << 14);
PropagatorResult propagator(const magnus::DriveStack& stack, double t0, const SystemParams& p,
                            int min_steps = 64, double tol = 1e-9, int max_steps = 1 << 14);

// Same midpoint product applied to a set of states only (no full matrix);
// convergence measured on the states.
struct StatePropagation {
  std::vector<CVec> states;
  int step_count = 0;
  double convergence = 0.0;
  bool converged = false;
};
StatePropagation propagate_states(const magnus::HarmonicSet& h, double t0, const SystemParams& p,
                                  const std::vector<CVec>& initial, int min_steps = 64,
                                  double tol = 1e-9, int max_steps = 1 << 14);

// Quasienergies from the propagator eigenphases, eps = -(lambda/T) arg u,
// folded into the first zone.
Eigen::VectorXd propagator_quasienergies(const CMat& unitary, const SystemParams& p);

// Fidelity of the one-period evolution on the q cat code states at
// amplitude alpha: F = (1/q) sum_s |<psi_s| U |psi_s>|.
double fidelity_cats(const CMat& unitary, int q, cplx alpha, int n_fock);

double state_fidelity(const fock::FockState& a, const fock::FockState& b);

// Per-m difference of absolute amplitudes |a_m| - |b_m|.
std::vector<double> amplitude_profile_delta(const fock::FockState& a, const fock::FockState& b);

// For each target vector, the mode whose micromotion snapshot at time t has
// the largest overlap magnitude.
struct LevelMatch {
  int mode = -1;
  double overlap = 0.0;
};
std::vector<LevelMatch> match_levels(const QuasienergySolution& sol, const std::vector<CVec>& targets,
                                     double t);

} // namespace ffg::floquet
