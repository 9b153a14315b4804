#pragma once

// Closed forms for the monochromatically driven oscillator: the RWA target
// operator, its exact Q-function, and the analytic first-order correction
// coefficients built from the delta-root bracket results.

#include "ffg/ncft.hpp"

namespace ffg::mono {

using linalg::CMat;

// RWA target (the l = 0 harmonic of beta cos(x cos Omega t + p sin Omega t
// + n Omega t)):
//   (beta/2) e^{-lambda/4 - i n pi/2} (lambda/2)^{-n/2} a^n L_{a^dag a}^{(-n)}(lambda/2) + h.c.
CMat rwa_target(const SystemParams& p, int n_fock);

// Exact Q-function beta e^{-lambda/4} J_n(r) cos(n theta + n pi/2).
double rwa_q_exact(const SystemParams& p, double r, double theta);

// NcFT coefficient of [V_l, V_{-l}] (monochromatic drive; support |k| < 2):
//   (beta^2/pi) S(k) sin(2l acos(k/2)) [cos(2n tau) + (-1)^{n+l} cos(2n acos(k/2))],
// S(k) = sin(lambda sin(2 acos(k/2))/2)/|sin(2 acos(k/2))| with its removable
// limits at k in {-2, 0, 2}.
cplx f00_l_minus_l(int l, double k, double tau, const SystemParams& p);

// NcFT coefficient of [V_{-l}, V_0] (t0 phase not included).
cplx f00_minus_l_0(int l, double k, double tau, const SystemParams& p);

// Assembled first-order coefficient
//   f^(1)(k,tau) = sum_{l=1}^{l_max} (1/lambda Omega l) [ f_{l,-l} +
//       f_{-l,0} e^{il Omega t0} + (f_{-l,0}(-k,tau) e^{il Omega t0})^* ].
cplx f1_analytic(double k, double tau, const SystemParams& p);

// f1_analytic wrapped as an NcFT coefficient with exact tau bands, usable by
// the inverse transform and harmonic machinery.
ncft::NcftCoefficient f1_analytic_coefficient(const SystemParams& p);

// Bracket coefficient f00_l_minus_l wrapped with exact tau bands {0, +-2n}.
ncft::NcftCoefficient f00_l_minus_l_coefficient(int l, const SystemParams& p);

} // namespace ffg::mono
