#pragma once

namespace shelab {

// Centered Gaussian density with variance t: p_t(x) = (2*pi*t)^(-1/2) exp(-x^2/(2t)).
// Throws std::domain_error for t <= 0.
double heat_kernel(double t, double x);
double log_heat_kernel(double t, double x);

// Density at time u of a Brownian bridge pinned at (0,0) and (t,x):
// p_{t-u}(x-z) p_u(z) / p_t(x) = p_{u(t-u)/t}(z - (u/t)x). Requires 0 < u < t.
double bridge_kernel(double u, double t, double x, double z);

// Two-point comparison kernel p_{t-s}(x-y) * p_{t-s}(y). Requires s < t.
double cov_kernel(double t, double s, double x, double y);

// Complementary error function: power series for |x| <= 2, Laplace continued
// fraction beyond. erfcx is the scaled variant exp(x^2) erfc(x), defined here
// for x >= 0 only.
double erfc(double x);
double erfcx(double x);
double normal_cdf(double x);

enum class ProxyMethod { quadrature, closed_form, asymptotic };

struct ProxyValue {
  double value = 0.0;
  double abs_error = 0.0;
  ProxyMethod method = ProxyMethod::closed_form;
  bool converged = false;
};

// Overlap-mass integral I(t,x) = \int_0^t p_{2r}(x) dr.
//  - quadrature: adaptive G7/K15 after the substitution r = u^2, which removes
//    the endpoint singularity at r = 0.
//  - closed_form: sqrt(t/pi) e^{-x^2/(4t)} - (|x|/2) erfc(|x|/(2 sqrt(t))),
//    evaluated through erfcx to keep the large-|x| cancellation mild.
//  - asymptotic: (2/sqrt(pi)) t^{3/2} |x|^{-2} e^{-x^2/(4t)}; rejects x = 0.
ProxyValue proxy_integral(double t, double x,
                          ProxyMethod method = ProxyMethod::closed_form);

}  // namespace shelab
