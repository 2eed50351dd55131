#include "shelab/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "shelab/quadrature.hpp"

namespace shelab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kSqrt2 = 1.41421356237309504880;

// Exponents below this are evaluated fully in log-space before the final exp.
constexpr double kLogSpaceCutoff = -700.0;
constexpr double kUnderflowLog = -745.2;

// erf via the cancellation-free series erf(x) = 2x e^{-x^2}/sqrt(pi) *
// sum_n (2x^2)^n / (2n+1)!!, good on |x| <= 2.
double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 80; ++n) {
    term *= 2.0 * x2 / static_cast<double>(2 * n + 1);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return 2.0 * x * std::exp(-x2) * kInvSqrtPi * sum;
}

// Laplace continued fraction for erfcx(x) = e^{x^2} erfc(x), x >= 2:
// sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
double erfcx_cf(double x) {
  double f = 0.0;
  for (int k = 100; k >= 1; --k) f = (0.5 * k) / (x + f);
  return kInvSqrtPi / (x + f);
}

}  // namespace

double heat_kernel(double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
  const double e = -x * x / (2.0 * t);
  const double lnorm = -0.5 * std::log(2.0 * kPi * t);
  if (e + lnorm < kUnderflowLog) return 0.0;
  if (e < kLogSpaceCutoff) return std::exp(e + lnorm);
  return std::exp(e) * std::exp(lnorm);
}

double log_heat_kernel(double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
  return -x * x / (2.0 * t) - 0.5 * std::log(2.0 * kPi * t);
}

double bridge_kernel(double u, double t, double x, double z) {
  if (!(u > 0.0) || !(u < t))
    throw std::domain_error("bridge_kernel: need 0 < u < t");
  const double v = u * (t - u) / t;
  return heat_kernel(v, z - (u / t) * x);
}

double cov_kernel(double t, double s, double x, double y) {
  if (!(s < t)) throw std::domain_error("cov_kernel: need s < t");
  const double a = t - s;
  const double l1 = log_heat_kernel(a, x - y);
  const double l2 = log_heat_kernel(a, y);
  if (l1 + l2 < kUnderflowLog) return 0.0;
  if (l1 < kLogSpaceCutoff || l2 < kLogSpaceCutoff || l1 + l2 < kLogSpaceCutoff)
    return std::exp(l1 + l2);
  return std::exp(l1) * std::exp(l2);
}

double erfc(double x) {
  const double ax = std::abs(x);
  double pos;  // erfc(|x|)
  if (ax <= 2.0) {
    pos = 1.0 - erf_series(ax);
  } else {
    const double e = -ax * ax;
    pos = e < kUnderflowLog ? 0.0 : std::exp(e) * erfcx_cf(ax);
  }
  return x >= 0.0 ? pos : 2.0 - pos;
}

double erfcx(double x) {
  if (x < 0.0) throw std::domain_error("erfcx: defined for x >= 0");
  if (x <= 2.0) return std::exp(x * x) * (1.0 - erf_series(x));
  return erfcx_cf(x);
}

double normal_cdf(double x) { return 0.5 * erfc(-x / kSqrt2); }

ProxyValue proxy_integral(double t, double x, ProxyMethod method) {
  if (!(t > 0.0)) throw std::domain_error("proxy_integral: t must be positive");
  ProxyValue out;
  out.method = method;
  switch (method) {
    case ProxyMethod::quadrature: {
      // After r = u^2 the integrand is simply e^{-x^2/(4u^2)}/sqrt(pi).
      // Pure relative tolerance: the tail values this feeds can sit far
      // below any fixed absolute floor.
      const double x2 = x * x;
      const QuadOptions opts{0.0, 1e-10, 4000};
      QuadResult q = integrate(
          [x2](double u) {
            if (u <= 0.0) return x2 == 0.0 ? kInvSqrtPi : 0.0;
            const double e = -x2 / (4.0 * u * u);
            return e < kUnderflowLog ? 0.0 : kInvSqrtPi * std::exp(e);
          },
          0.0, std::sqrt(t), opts);
      out.value = q.value;
      out.abs_error = q.abs_error;
      out.converged = q.converged;
      return out;
    }
    case ProxyMethod::closed_form: {
      const double sqt = std::sqrt(t);
      const double b = std::abs(x) / (2.0 * sqt);
      const double lead = sqt * kInvSqrtPi;
      if (b == 0.0) {
        out.value = lead;
        out.abs_error = 4e-16 * lead;
        out.converged = true;
        return out;
      }
      const double bracket = lead - 0.5 * std::abs(x) * erfcx(b);
      const double e = -b * b;
      const double damp = e < kUnderflowLog ? 0.0 : std::exp(e);
      out.value = damp * bracket;
      // two like-sized terms cancel down to ~lead/(2 b^2)
      out.abs_error =
          damp * 2.0 * lead * 2.2e-16 + std::abs(out.value) * 4.4e-16;
      out.converged = true;
      return out;
    }
    case ProxyMethod::asymptotic: {
      if (x == 0.0)
        throw std::domain_error("proxy_integral: asymptotic needs x != 0");
      const double e = -x * x / (4.0 * t);
      const double damp = e < kUnderflowLog ? 0.0 : std::exp(e);
      out.value = 2.0 * kInvSqrtPi * t * std::sqrt(t) / (x * x) * damp;
      out.abs_error = out.value * 6.0 * t / (x * x);
      out.converged = true;
      return out;
    }
  }
  throw std::logic_error("proxy_integral: unknown method");
}

}  // namespace shelab
