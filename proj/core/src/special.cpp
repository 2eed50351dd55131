#include "shelab/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shelab/kernels.hpp"

namespace shelab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_core(double z) {
  // z >= 0.5; returns Gamma(z) without reflection
  z -= 1.0;
  double x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double lanczos_log(double z) {
  z -= 1.0;
  double x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double ml_half_one(double z) {
  // E_{1/2,1}(z) = e^{z^2} erfc(-z)
  if (z < 0.0) return erfcx(-z);
  const double e = z * z;
  if (e > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(e) * (2.0 - erfc(z));
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: x must be positive");
  if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos_core(1.0 - x));
  return lanczos_core(x);
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma_fn: x must be positive");
  if (x < 0.5)
    return std::log(kPi / std::sin(kPi * x)) - lanczos_log(1.0 - x);
  return lanczos_log(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("beta_fn: arguments must be positive");
  if (a + b < 150.0) return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
  return std::exp(log_gamma_fn(a) + log_gamma_fn(b) - log_gamma_fn(a + b));
}

SeriesValue mittag_leffler_series(double alpha, double beta, double z,
                                  int max_terms) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("mittag_leffler_series: alpha, beta must be positive");
  SeriesValue out;
  double sum = 0.0, comp = 0.0, sum_abs = 0.0;
  const double la = std::abs(z) > 0.0 ? std::log(std::abs(z)) : 0.0;
  double term = 0.0;
  int n = 0;
  for (; n < max_terms; ++n) {
    const double lt = (z == 0.0 && n > 0)
                          ? -std::numeric_limits<double>::infinity()
                          : n * la - log_gamma_fn(alpha * n + beta);
    term = lt < -745.0 ? 0.0 : std::exp(lt);
    if (z < 0.0 && (n & 1)) term = -term;
    // Kahan step
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    sum_abs += std::abs(term);
    if (n > 2 && std::abs(term) <= 1e-17 * sum_abs) {
      ++n;
      out.converged = true;
      break;
    }
  }
  out.value = sum;
  out.terms = n;
  out.abs_error = 2.2e-16 * sum_abs + 2.0 * std::abs(term);
  return out;
}

double mittag_leffler(const MittagLefflerParams& p) {
  if (p.alpha == 0.5 && p.beta == 1.0) return ml_half_one(p.z);
  if (p.alpha == 0.5 && p.beta == 0.5)
    return kInvSqrtPi + p.z * ml_half_one(p.z);
  SeriesValue s = mittag_leffler_series(p.alpha, p.beta, p.z);
  if (!s.converged)
    throw std::runtime_error("mittag_leffler: series did not converge");
  return s.value;
}

}  // namespace shelab
