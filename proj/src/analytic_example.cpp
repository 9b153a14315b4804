#include "ffg/analytic_example.hpp"

#include <cmath>
#include <set>

#include "ffg/specfun.hpp"

namespace ffg::mono {

CMat rwa_target(const SystemParams& p, int n_fock) {
  const int n = p.n_sym;
  if (n_fock < n + 2) throw std::invalid_argument("rwa_target: n_fock must be >= n_sym + 2");
  const double x = p.lambda / 2.0;
  // c0 (-lambda/2)^n = (beta/2) e^{-lambda/4} i^n (lambda/2)^{n/2} after the
  // Laguerre reflection L_m^{(-n)} -> L_{m-n}^{(n)}.
  const cplx pref = (p.beta / 2.0) * std::exp(-p.lambda / 4.0) * std::pow(I, n) * std::pow(x, n / 2.0);
  CMat t = CMat::Zero(n_fock, n_fock);
  for (int j = 0; j + n < n_fock; ++j)
    t(j, j + n) = pref * specfun::sqrt_factorial_ratio(j, j + n) * specfun::laguerre_assoc(j, n, x);
  return t + t.adjoint().eval();
}

double rwa_q_exact(const SystemParams& p, double r, double theta) {
  if (r < 0.0) throw std::invalid_argument("rwa_q_exact: r must be >= 0");
  const int n = p.n_sym;
  return p.beta * std::exp(-p.lambda / 4.0) * specfun::bessel_j(n, r) *
         std::cos(n * theta + n * PI / 2.0);
}

namespace {

// sin(lambda s / 2)/|s| at s = sin(2 acos(k/2)), with the removable limit
// (lambda/2) sign(s) where s vanishes (k in {-2, 0, 2}).
double kernel_s(double k, double lambda) {
  const double alpha = std::acos(std::clamp(k / 2.0, -1.0, 1.0));
  const double s = std::sin(2.0 * alpha);
  if (std::abs(s) < 1e-8) return 0.5 * lambda * (s >= 0.0 ? 1.0 : -1.0);
  return std::sin(0.5 * lambda * s) / std::abs(s);
}

} // namespace

cplx f00_l_minus_l(int l, double k, double tau, const SystemParams& p) {
  if (l < 1) throw std::invalid_argument("f00_l_minus_l: l must be >= 1");
  if (std::abs(k) >= 2.0) return 0.0;
  const int n = p.n_sym;
  const double alpha = std::acos(k / 2.0);
  const double sgn = ((n + l) % 2 == 0) ? 1.0 : -1.0;
  return (p.beta * p.beta / PI) * kernel_s(k, p.lambda) * std::sin(2.0 * l * alpha) *
         (std::cos(2.0 * n * tau) + sgn * std::cos(2.0 * n * alpha));
}

cplx f00_minus_l_0(int l, double k, double tau, const SystemParams& p) {
  if (l < 1) throw std::invalid_argument("f00_minus_l_0: l must be >= 1");
  if (std::abs(k) >= 2.0) return 0.0;
  const int n = p.n_sym;
  const double alpha = std::acos(k / 2.0);
  const double alphap = PI - alpha; // acos(-k/2)
  const double sgn_n = (n % 2 == 0) ? 1.0 : -1.0;
  const cplx bracket = std::exp(I * static_cast<double>(2 * n + l) * tau) * std::sin(l * alpha) -
                       std::exp(-I * static_cast<double>(2 * n - l) * tau) * std::sin(l * alphap) +
                       std::exp(I * static_cast<double>(l) * tau) *
                           (sgn_n * std::sin((2 * n + l) * alpha) + sgn_n * std::sin((2 * n - l) * alphap));
  return -(p.beta * p.beta / (2.0 * PI)) * kernel_s(k, p.lambda) * bracket;
}

cplx f1_analytic(double k, double tau, const SystemParams& p) {
  if (std::abs(k) >= 2.0) return 0.0;
  // reference-time phases e^{-il Omega t0}, matching the first-order Magnus
  // term of U(t0+T, t0)
  cplx sum = 0.0;
  for (int l = 1; l <= p.l_max; ++l) {
    const cplx t0_phase = std::exp(-I * static_cast<double>(l) * p.omega * p.t0);
    const cplx term2 = f00_minus_l_0(l, k, tau, p) * t0_phase;
    const cplx term3 = std::conj(f00_minus_l_0(l, -k, tau, p) * t0_phase);
    sum += (f00_l_minus_l(l, k, tau, p) + term2 + term3) / (p.lambda * p.omega * l);
  }
  return sum;
}

namespace {

// Exact tau-band radials by DFT projection of a closed-form coefficient;
// legitimate because the tau content is a trig polynomial of low degree.
// Support is |k| <= 2 with a kink at the boundary, flagged for quadrature.
ncft::CallbackForm banded_callback(std::function<cplx(double, double)> eval,
                                   const std::set<int>& bands, int grid) {
  ncft::CallbackForm form;
  form.eval = eval;
  form.k_edges = {0.0, 2.0};
  for (int d : bands) {
    form.bands.emplace_back(d, [eval, d, grid](double k) -> cplx {
      cplx acc = 0.0;
      for (int j = 0; j < grid; ++j) {
        const double tau = 2.0 * PI * j / grid;
        acc += eval(k, tau) * std::exp(-I * static_cast<double>(d) * tau);
      }
      return acc / static_cast<double>(grid);
    });
  }
  return form;
}

} // namespace

ncft::NcftCoefficient f1_analytic_coefficient(const SystemParams& p) {
  std::set<int> bands{0, 2 * p.n_sym, -2 * p.n_sym};
  for (int l = 1; l <= p.l_max; ++l) {
    for (int d : {l, -l, 2 * p.n_sym + l, -(2 * p.n_sym + l), 2 * p.n_sym - l, -(2 * p.n_sym - l)})
      bands.insert(d);
  }
  const SystemParams prm = p;
  const int grid = 4 * (2 * p.n_sym + p.l_max + 2);
  return ncft::NcftCoefficient(
      banded_callback([prm](double k, double tau) { return f1_analytic(k, tau, prm); }, bands, grid));
}

ncft::NcftCoefficient f00_l_minus_l_coefficient(int l, const SystemParams& p) {
  const std::set<int> bands{0, 2 * p.n_sym, -2 * p.n_sym};
  const SystemParams prm = p;
  const int grid = 4 * (2 * p.n_sym + 2);
  return ncft::NcftCoefficient(banded_callback(
      [prm, l](double k, double tau) { return f00_l_minus_l(l, k, tau, prm); }, bands, grid));
}

} // namespace ffg::mono
