#pragma once

// Truncated Fock-space representation: ladder/quadrature operators, plane
// waves, coherent and rotational cat states, Q-functions, rotations.

#include <utility>
#include <vector>

#include "ffg/linalg.hpp"
#include "ffg/params.hpp"

namespace ffg::fock {

using linalg::CMat;
using linalg::CVec;

struct FockState {
  CVec amp;
  double tail = 0.0; // |amp[N-1]|^2 before normalization cut
  bool truncation_ok(double threshold = 1e-8) const { return tail <= threshold; }
};

// Ladder pair (a, a^dagger) on an N-dimensional truncation.
std::pair<CMat, CMat> ladder(int n_fock);

// x = sqrt(lambda/2) (a^dag + a),  p = i sqrt(lambda/2) (a^dag - a).
CMat position_op(int n_fock, double lambda);
CMat momentum_op(int n_fock, double lambda);
CMat number_op(int n_fock);

// <n| exp(i k (x cos tau + p sin tau)) |m>, evaluated from the closed form
//   e^{-lambda k^2/4 - i(m-n)tau} (ik sqrt(lambda/2))^{m-n}
//     sqrt(n!/m!) L_n^{m-n}(lambda k^2/2),
// with the n > m half obtained from the Laguerre reflection identity.
CMat planewave_matrix(double k, double tau, const SystemParams& p);

// tau = 0 plane-wave matrix M(k) = <n|e^{ik x}|m>, complex symmetric.
// Built from a Laguerre recurrence table in O(N^2); the general-tau matrix
// is the rotation conjugate R(tau)^dag M(k) R(tau).
CMat planewave_core(double k, double lambda, int n_fock);

// Rotation R_tau = exp(-i tau a^dag a).
CMat rotation_operator(double tau, int n_fock);

// Photon parity exp(i pi a^dag a).
CMat parity_op(int n_fock);

// Coherent state |alpha> by normalized term recursion.
FockState coherent_state(cplx alpha, int n_fock);

// q-component rotational cat state
//   |psi_s> = N_s^{-1/2} sum_p e^{i s 2 pi p / q} |alpha e^{i 2 pi p / q}>,
// photon-number support on {m : m = s mod q}.  Throws on degenerate
// normalization (alpha -> 0 with s != 0).
FockState cat_state(int q, int s, cplx alpha, int n_fock);

// Exact normalization factor N_s = sum_{p,p'} <alpha_p'|alpha_p> phases.
double cat_norm_factor(int q, int s, cplx alpha);

// Retry helper: rebuilds a state at 2N once if the truncation tail exceeds
// the threshold; returns the accepted state and the dimension used.
template <typename Builder>
std::pair<FockState, int> with_tail_retry(Builder&& build, int n_fock, double threshold) {
  FockState s = build(n_fock);
  if (s.truncation_ok(threshold)) return {std::move(s), n_fock};
  FockState s2 = build(2 * n_fock);
  return {std::move(s2), 2 * n_fock};
}

// q-fold rotational lattice target
//   (beta/|alpha0|^{2q}) e^{-gamma n} (a^dag q - alpha0*^q)(a^q - alpha0^q) e^{-gamma n};
// the coherent states |alpha0 e^{gamma + i 2 pi s/q}> are its exact zero modes.
CMat cat_target_operator(int q, cplx alpha0, double gamma, double beta, int n_fock);

// Q-function samples Q_i = <alpha_i| op |alpha_i>, alpha = (x+ip)/sqrt(2 lambda).
struct PhasePoint {
  double x, p;
};
std::vector<cplx> qfunction(const CMat& op, const std::vector<PhasePoint>& grid, const SystemParams& p);
cplx qfunction_point(const CMat& op, double x, double p, const SystemParams& prm);

} // namespace ffg::fock
