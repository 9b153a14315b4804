#include "ffg/fockspace.hpp"

#include <cmath>
#include <stdexcept>

#include "ffg/specfun.hpp"

namespace ffg::fock {

std::pair<CMat, CMat> ladder(int n_fock) {
  if (n_fock < 2) throw std::invalid_argument("ladder: n_fock must be >= 2");
  CMat a = CMat::Zero(n_fock, n_fock);
  for (int m = 1; m < n_fock; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return {a, a.adjoint()};
}

CMat position_op(int n_fock, double lambda) {
  auto [a, ad] = ladder(n_fock);
  return std::sqrt(lambda / 2.0) * (ad + a);
}

CMat momentum_op(int n_fock, double lambda) {
  auto [a, ad] = ladder(n_fock);
  return I * std::sqrt(lambda / 2.0) * (ad - a);
}

CMat number_op(int n_fock) {
  CMat n = CMat::Zero(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) n(m, m) = m;
  return n;
}

CMat planewave_core(double k, double lambda, int n_fock) {
  if (!std::isfinite(k)) throw std::invalid_argument("planewave_core: k must be finite");
  if (k == 0.0) return CMat::Identity(n_fock, n_fock);

  const double z = lambda * k * k / 2.0;
  const double gauss = std::exp(-z / 2.0); // e^{-lambda k^2/4}
  const cplx base = I * k * std::sqrt(lambda / 2.0);

  std::vector<double> lgam(n_fock + 1);
  for (int m = 0; m <= n_fock; ++m) lgam[m] = std::lgamma(m + 1.0);

  // L_n^{(d)}(z) by the degree recurrence, one diagonal offset d at a time.
  CMat a(n_fock, n_fock);
  cplx basepow = 1.0;
  for (int d = 0; d < n_fock; ++d) {
    double lprev = 0.0; // L_{n-1}^{(d)}
    double lcur = 1.0;  // L_0^{(d)}
    for (int n = 0; n + d < n_fock; ++n) {
      const double ratio = std::exp(0.5 * (lgam[n] - lgam[n + d]));
      const cplx entry = gauss * basepow * ratio * lcur;
      a(n, n + d) = entry;
      a(n + d, n) = entry; // complex symmetric at tau = 0
      const double lnext = ((2.0 * n + 1.0 + d - z) * lcur - (n + d) * lprev) / (n + 1.0);
      lprev = lcur;
      lcur = lnext;
    }
    basepow *= base;
  }
  return a;
}

CMat planewave_matrix(double k, double tau, const SystemParams& p) {
  const int n_fock = p.n_fock;
  CMat a = planewave_core(k, p.lambda, n_fock);
  if (tau == 0.0 || k == 0.0) return a;
  // e^{ik x_tau} = R_tau^dag M(k) R_tau with R_tau = diag(e^{-im tau}).
  CVec u(n_fock);
  for (int m = 0; m < n_fock; ++m) u(m) = std::exp(I * tau * static_cast<double>(m));
  return u.asDiagonal() * a * u.conjugate().asDiagonal();
}

CMat rotation_operator(double tau, int n_fock) {
  CMat r = CMat::Zero(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) r(m, m) = std::exp(-I * tau * static_cast<double>(m));
  return r;
}

CMat parity_op(int n_fock) { return rotation_operator(-PI, n_fock); }

FockState coherent_state(cplx alpha, int n_fock) {
  if (n_fock < 2) throw std::invalid_argument("coherent_state: n_fock must be >= 2");
  CVec c(n_fock);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int m = 1; m < n_fock; ++m) c(m) = c(m - 1) * alpha / std::sqrt(static_cast<double>(m));
  FockState s;
  s.tail = std::norm(c(n_fock - 1));
  s.amp = c / c.norm();
  return s;
}

double cat_norm_factor(int q, int s, cplx alpha) {
  // N_s = sum_{p,p'} e^{-i s 2pi (p-p')/q} <alpha w^{p'}|alpha w^p>, with the
  // phase sign that puts the photon-number support on m = s (mod q).
  // Overlaps from the closed coherent form; q * single sum over p - p'.
  double n = 0.0;
  for (int d = 0; d < q; ++d) {
    const cplx w = std::exp(I * 2.0 * PI * static_cast<double>(d) / static_cast<double>(q));
    const cplx ov = std::exp(-std::norm(alpha) + std::conj(alpha) * alpha * w);
    n += (std::exp(-I * 2.0 * PI * static_cast<double>(s * d) / static_cast<double>(q)) * ov).real();
  }
  return q * n;
}

FockState cat_state(int q, int s, cplx alpha, int n_fock) {
  if (q < 2) throw std::invalid_argument("cat_state: q must be >= 2");
  if (s < 0 || s >= q) throw std::invalid_argument("cat_state: quasinumber s must be in [0, q)");
  const double norm_factor = cat_norm_factor(q, s, alpha);
  if (norm_factor <= 1e-12 * q * q)
    throw std::domain_error("cat_state: degenerate normalization (alpha too small for s != 0)");

  CVec c = CVec::Zero(n_fock);
  double tail = 0.0;
  for (int p = 0; p < q; ++p) {
    const cplx phase = std::exp(-I * 2.0 * PI * static_cast<double>(s * p) / static_cast<double>(q));
    const cplx ap = alpha * std::exp(I * 2.0 * PI * static_cast<double>(p) / static_cast<double>(q));
    FockState comp = coherent_state(ap, n_fock);
    // components share |alpha|, so their common normalization cancels here
    c += phase * comp.amp;
    tail = std::max(tail, comp.tail);
  }
  FockState out;
  out.tail = tail;
  out.amp = c / c.norm();
  return out;
}

CMat cat_target_operator(int q, cplx alpha0, double gamma, double beta, int n_fock) {
  if (q < 2) throw std::invalid_argument("cat_target_operator: q must be >= 2");
  if (gamma <= 0.0) throw std::invalid_argument("cat_target_operator: gamma must be > 0");
  auto [a, ad] = ladder(n_fock);
  CMat aq = CMat::Identity(n_fock, n_fock);
  for (int j = 0; j < q; ++j) aq = a * aq;
  CMat damp = CMat::Zero(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) damp(m, m) = std::exp(-gamma * m);
  const CMat low = aq - std::pow(alpha0, q) * CMat::Identity(n_fock, n_fock);
  const CMat inner = low.adjoint() * low;
  return (beta / std::pow(std::abs(alpha0), 2 * q)) * (damp * inner * damp);
}

cplx qfunction_point(const CMat& op, double x, double p, const SystemParams& prm) {
  const cplx alpha = cplx(x, p) / std::sqrt(2.0 * prm.lambda);
  const FockState st = coherent_state(alpha, static_cast<int>(op.rows()));
  return st.amp.dot(op * st.amp); // Eigen dot conjugates the left argument
}

std::vector<cplx> qfunction(const CMat& op, const std::vector<PhasePoint>& grid, const SystemParams& p) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (const auto& g : grid) out.push_back(qfunction_point(op, g.x, g.p, p));
  return out;
}

} // namespace ffg::fock
