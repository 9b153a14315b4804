#include "ffg/linalg.hpp"

#include <cmath>
#include <stdexcept>

#ifdef FFG_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace ffg::linalg {

double max_abs(const CMat& a) { return a.cwiseAbs().maxCoeff(); }

double herm_deviation(const CMat& a) { return max_abs(a - a.adjoint()); }

double rel_frobenius(const CMat& a, const CMat& b, double floor) {
  const double scale = std::max({a.norm(), b.norm(), floor});
  return (a - b).norm() / scale;
}

EighResult eigh(const CMat& a, double herm_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: matrix not square");
  if (herm_deviation(a) > herm_tol) throw std::runtime_error("eigh: matrix not Hermitian within tolerance");
  CMat h = 0.5 * (a + a.adjoint());

#ifdef FFG_HAVE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(h.rows());
  RVec w(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                   reinterpret_cast<lapack_complex_double*>(h.data()), n, w.data());
  if (info != 0) throw std::runtime_error("eigh: zheevd failed, info=" + std::to_string(info));
  return {std::move(w), std::move(h)};
#else
  Eigen::SelfAdjointEigenSolver<CMat> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
#endif
}

CMat expm(const CMat& a) {
  const int n = static_cast<int>(a.rows());
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const CMat b = a / std::pow(2.0, squarings);

  // Taylor to order 14 (remainder below 1e-17 for ||B|| <= 0.5), with an
  // early exit once terms stop contributing at double precision.
  CMat term = CMat::Identity(n, n);
  CMat sum = term;
  for (int j = 1; j <= 14; ++j) {
    term = (b * term) / static_cast<double>(j);
    sum += term;
    if (max_abs(term) <= 1e-18 * max_abs(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

CVec expm_apply(const CMat& a, const CVec& v) {
  CVec term = v;
  CVec sum = v;
  for (int j = 1; j <= 64; ++j) {
    term = (a * term) / static_cast<double>(j);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  return sum;
}

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n with the Chebyshev-angle initial guess.
    double z = std::cos(PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    q.nodes[i] = xm - xl * z;
    q.nodes[n - 1 - i] = xm + xl * z;
    q.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    q.weights[n - 1 - i] = q.weights[i];
  }
  return q;
}

} // namespace ffg::linalg
