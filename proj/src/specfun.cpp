#include "ffg/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ffg/params.hpp"

namespace ffg::specfun {

double gamma_inv(double x) {
  if (x > 0.5) return std::exp(-std::lgamma(x));
  // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi.  Exact zeros at
  // nonpositive integers come from sin(pi x).
  const double s = std::sin(PI * x);
  if (s == 0.0) return 0.0;
  return std::exp(std::lgamma(1.0 - x)) * s / PI;
}

double sqrt_factorial_ratio(int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("sqrt_factorial_ratio: negative index");
  return std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
}

namespace {

// Three-term recurrence in the degree, parameter a >= 0 (or any a with
// nondegenerate recurrence); stable for x >= 0.
double laguerre_recurrence(int n, double a, double x) {
  double lkm1 = 1.0;              // L_0
  if (n == 0) return lkm1;
  double lk = 1.0 + a - x;        // L_1
  for (int j = 1; j < n; ++j) {
    const double lkp1 = ((2.0 * j + 1.0 + a - x) * lk - (j + a) * lkm1) / (j + 1.0);
    lkm1 = lk;
    lk = lkp1;
  }
  return lk;
}

} // namespace

double laguerre_assoc(int n, int a, double x) {
  if (n < 0) throw std::invalid_argument("laguerre_assoc: degree must be >= 0");
  if (n == 0) return 1.0;
  if (a >= 0) return laguerre_recurrence(n, static_cast<double>(a), x);

  const int p = -a;
  if (n - p < 0)
    throw std::invalid_argument("laguerre_assoc: need n + a >= 0 for negative parameter, got n=" +
                                std::to_string(n) + " a=" + std::to_string(a));
  if (x <= 0.0)
    throw std::domain_error("laguerre_assoc: reflection identity requires x > 0");

  // L_n^(-p)(x) = ((n-p)!/n!) (-x)^p L_{n-p}^(p)(x)
  const double ratio = std::exp(std::lgamma(n - p + 1.0) - std::lgamma(n + 1.0));
  return ratio * std::pow(-x, p) * laguerre_recurrence(n - p, static_cast<double>(p), x);
}

double bessel_j(int n, double x) {
  if (n < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  const double sign = (x < 0.0 && (n % 2 == 1)) ? -1.0 : 1.0; // J_n(-x) = (-1)^n J_n(x)

  // Miller's algorithm: downward recurrence from well above max(n, |x|),
  // normalized by J_0 + 2 sum J_2k = 1.
  const int m0 = static_cast<int>(std::max(static_cast<double>(n), ax));
  int mstart = m0 + 16 + static_cast<int>(std::sqrt(42.0 * (m0 + 1)));
  if (mstart % 2) ++mstart;

  double jp = 0.0, jc = 1e-30;
  double norm = 0.0, jn = 0.0;
  for (int k = mstart; k >= 0; --k) {
    const double jm = (2.0 * (k + 1.0) / ax) * jc - jp;
    jp = jc;
    jc = jm;
    if (k % 2 == 0 && k > 0) norm += 2.0 * jc;
    if (k == n) jn = jc;
    // Rescale to dodge overflow of the unnormalized recurrence.
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      jn *= 1e-250;
    }
  }
  norm += jc; // k = 0 term
  return sign * jn / norm;
}

namespace {

// 1/Gamma(x) in signed-log form; zero at the poles of Gamma.
struct SignedLogInvGamma {
  double log_abs = 0.0;
  double sign = 0.0;
};

SignedLogInvGamma log_inv_gamma(double x) {
  if (x > 0.0) return {-std::lgamma(x), 1.0};
  if (x == std::floor(x)) return {0.0, 0.0};
  const double s = std::sin(PI * x);
  return {std::log(std::abs(s)) + std::lgamma(1.0 - x) - std::log(PI), s > 0.0 ? 1.0 : -1.0};
}

} // namespace

double kummer_1f1_regularized(double a, double b, double z) {
  if (z < 0.0) {
    // Kummer transformation keeps the series argument nonnegative.
    return std::exp(z) * kummer_1f1_regularized(b - a, b, -z);
  }
  if (z == 0.0) return gamma_inv(b);

  // M~(a;b;z) = sum_j (a)_j z^j / (j! Gamma(b+j)).  Terms are assembled in
  // signed-log form: the individual factors overflow double long before the
  // term itself does, and poles of Gamma(b+j) give exact zero terms.
  const double lnz = std::log(z);
  double lpoch = 0.0; // log |(a)_j|
  double spoch = 1.0;
  double sum = 0.0;
  for (int j = 0; j <= 10000; ++j) {
    const SignedLogInvGamma ig = log_inv_gamma(b + j);
    if (ig.sign != 0.0) {
      const double term = spoch * ig.sign * std::exp(lpoch + j * lnz - std::lgamma(j + 1.0) + ig.log_abs);
      sum += term;
      if (j > std::abs(z) && j > std::abs(a) && std::abs(term) <= 1e-17 * (std::abs(sum) + 1e-300))
        return sum;
    }
    const double factor = a + j;
    if (factor == 0.0) return sum; // terminating series (a a nonpositive integer)
    lpoch += std::log(std::abs(factor));
    spoch *= (factor > 0.0 ? 1.0 : -1.0);
  }
  throw std::runtime_error("kummer_1f1_regularized: series did not converge in 10^4 terms");
}

} // namespace ffg::specfun
