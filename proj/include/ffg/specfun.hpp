#pragma once

// Scalar special-function kernels: associated Laguerre polynomials with
// integer (possibly negative) parameter, integer-order Bessel J, and the
// gamma-regularized Kummer confluent hypergeometric function.  Double
// precision throughout.

namespace ffg::specfun {

// 1/Gamma(x) for real x; zero at nonpositive integers.
double gamma_inv(double x);

// sqrt(n!/m!) without overflow.
double sqrt_factorial_ratio(int n, int m);

// Associated Laguerre polynomial L_n^(a)(x) with integer parameter a.
//
// a >= 0 evaluates the standard three-term recurrence in the degree.  a < 0
// requires n + a >= 0 and x > 0 and goes through the reflection identity
//   L_n^(-p)(x) = ((n-p)!/n!) (-x)^p L_{n-p}^(p)(x),
// which keeps the recurrence parameter nonnegative.  Degree 0 returns 1 for
// any a.  Throws std::domain_error when the reflection is required at
// x <= 0 and std::invalid_argument when n + a < 0.
double laguerre_assoc(int n, int a, double x);

// Bessel function of the first kind, integer order n >= 0, real x.
// |error| <= ~1e-13 over n <= 50, |x| <= 50 (Miller's downward recurrence
// with series normalization).
double bessel_j(int n, double x);

// Regularized Kummer function M~(a;b;z) = 1F1(a;b;z)/Gamma(b), finite for
// every real b including nonpositive integers.  Series summation with
// term-ratio control; negative z goes through the Kummer transformation
// M~(a;b;z) = e^z M~(b-a;b;-z) to avoid cancellation.  Throws
// std::runtime_error if 10^4 terms do not reach tolerance.
double kummer_1f1_regularized(double a, double b, double z);

} // namespace ffg::specfun
