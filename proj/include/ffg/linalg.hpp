#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ffg/params.hpp"

namespace ffg::linalg {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct EighResult {
  RVec values;  // ascending
  CMat vectors; // columns
};

// Dense Hermitian eigensolve.  Backed by LAPACK zheevd when built with it,
// Eigen's SelfAdjointEigenSolver otherwise.  The input is symmetrized first;
// throws if the anti-Hermitian part exceeds herm_tol.
EighResult eigh(const CMat& a, double herm_tol = 1e-10);

// exp(A) by scaling-and-squaring with a fixed-order Taylor kernel.  Intended
// for the small-norm step generators of the propagator; exact enough for
// any finite norm, just not the cheapest possible at large norms.
CMat expm(const CMat& a);

// w = exp(A) v by a truncated Taylor series, no matrix-matrix products.
CVec expm_apply(const CMat& a, const CVec& v);

double max_abs(const CMat& a);
double herm_deviation(const CMat& a);

// Inner (N-margin)x(N-margin) block, the part of a truncated Fock operator
// unaffected by edge artifacts.
inline CMat trusted_block(const CMat& a, int margin = 10) {
  const int n = static_cast<int>(a.rows()) - margin;
  if (n <= 0) return a;
  return a.topLeftCorner(n, n);
}

// Relative Frobenius distance ||a-b||_F / max(||a||_F, ||b||_F, floor).
double rel_frobenius(const CMat& a, const CMat& b, double floor = 1e-300);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b].
Quadrature gauss_legendre(int n, double a, double b);

} // namespace ffg::linalg
