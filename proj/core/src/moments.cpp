#include "shelab/moments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "shelab/kernels.hpp"
#include "shelab/special.hpp"

namespace shelab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;

void check_beta_tau(double beta, double tau) {
  if (beta < 0.0) throw std::domain_error("coupling must be nonnegative");
  if (tau < 0.0) throw std::domain_error("time must be nonnegative");
}

}  // namespace

double m2_closed(double beta, double tau) {
  check_beta_tau(beta, tau);
  const double b4t = beta * beta * beta * beta * tau;
  return 1.0 + std::sqrt(kPi * b4t) * std::exp(0.25 * b4t) *
                   normal_cdf(beta * beta * std::sqrt(0.5 * tau));
}

double pam_m2_closed(double beta, double t) {
  check_beta_tau(beta, t);
  const double b4t = beta * beta * beta * beta * t;
  return 2.0 * std::exp(0.25 * b4t) *
         normal_cdf(beta * beta * std::sqrt(0.5 * t));
}

std::vector<double> picard_ladder(int n_max) {
  if (n_max < 0) throw std::domain_error("picard_ladder: n_max must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  for (int n = 0; n < n_max; ++n) {
    const double ratio =
        gamma_fn(0.5 * (n + 1)) / (2.0 * gamma_fn(0.5 * (n + 2)));
    c[n + 1] = c[n] * ratio;
  }
  return c;
}

double m2_series(double beta, double tau, int n_terms) {
  check_beta_tau(beta, tau);
  if (n_terms < 0) throw std::domain_error("m2_series: n_terms must be >= 0");
  const double y = beta * beta * std::sqrt(tau);
  if (y == 0.0) return 1.0;
  const double ly = std::log(y);
  // log(c_n y^n) formed without either factor, so coefficients that would
  // underflow and powers that would overflow never meet
  const auto log_term = [ly](int n) {
    return n * (ly - std::log(2.0)) + 0.5 * std::log(kPi) -
           log_gamma_fn(0.5 * (n + 1));
  };
  double max_log = 0.0;  // the n = 0 term is exactly 1
  for (int n = 1; n <= n_terms; ++n)
    max_log = std::max(max_log, log_term(n));
  double scaled = 0.0, comp = 0.0;
  for (int n = 0; n <= n_terms; ++n) {
    const double term = std::exp(log_term(n) - max_log);
    const double adj = term - comp;
    const double s = scaled + adj;
    comp = (s - scaled) - adj;
    scaled = s;
  }
  const double ls = max_log + std::log(scaled);
  return ls > 709.0 ? HUGE_VAL : std::exp(ls);
}

namespace {

// Exact panel weights for int_p^q density(u) w(u) du with the density
// piecewise linear in sqrt(u). Both moment solutions behave like
// 1 + a sqrt(u) near zero, so the sqrt basis keeps the rate a plain linear
// one loses on the origin panels. A = int w, M = int sqrt(u) w; the weight
// on the right value is (M - sqrt(p) A)/(sqrt(q) - sqrt(p)).
struct PanelWeights {
  double w_left, w_right;
};

PanelWeights split_sqrt_basis(double p, double q, double A, double M) {
  const double sp = std::sqrt(p);
  const double sq = std::sqrt(q);
  const double w_right = (M - sp * A) / (sq - sp);
  return {A - w_right, w_right};
}

// w(u) = 1/sqrt(u (tau - u)):
//   int w  = 2 asin(sqrt(u/tau)),  int sqrt(u) w = -2 sqrt(tau - u)
PanelWeights bridge_panel(double tau, double p, double q) {
  const double A = 2.0 * (std::asin(std::sqrt(q / tau)) -
                          std::asin(std::sqrt(p / tau)));
  // 2 (sqrt(tau-p) - sqrt(tau-q)) without cancellation far from tau
  const double M =
      2.0 * (q - p) / (std::sqrt(tau - p) + std::sqrt(tau - q));
  return split_sqrt_basis(p, q, A, M);
}

// w(u) = 1/sqrt(tau - u):
//   int w = -2 sqrt(tau - u),
//   int sqrt(u) w = tau asin(sqrt(u/tau)) - sqrt(u (tau - u))
PanelWeights flat_panel(double tau, double p, double q) {
  const double A =
      2.0 * (q - p) / (std::sqrt(tau - p) + std::sqrt(tau - q));
  const double mq =
      tau * std::asin(std::sqrt(q / tau)) - std::sqrt(q * (tau - q));
  const double mp =
      tau * std::asin(std::sqrt(p / tau)) - std::sqrt(p * (tau - p));
  return split_sqrt_basis(p, q, A, mq - mp);
}

template <class Panel>
MomentCurve solve_volterra(double beta, double tau_max, int n_steps,
                           Panel panel, bool sqrt_tau_prefactor) {
  if (!(tau_max > 0.0)) throw std::domain_error("volterra: tau_max > 0");
  if (n_steps < 2) throw std::domain_error("volterra: need n_steps >= 2");
  if (beta < 0.0) throw std::domain_error("volterra: coupling >= 0");
  const double h = tau_max / n_steps;
  MomentCurve out;
  out.source = "volterra";
  out.beta = beta;
  out.tau.resize(n_steps + 1);
  out.value.assign(n_steps + 1, 1.0);
  for (int k = 0; k <= n_steps; ++k) out.tau[k] = k * h;
  const double c0 = beta * beta / (2.0 * kSqrtPi);
  for (int k = 1; k <= n_steps; ++k) {
    const double tau = out.tau[k];
    const double c = sqrt_tau_prefactor ? c0 * std::sqrt(tau) : c0;
    double known = 0.0, comp = 0.0;
    double w_unknown = 0.0;
    for (int j = 0; j < k; ++j) {
      const PanelWeights w = panel(tau, out.tau[j], out.tau[j + 1]);
      double contrib = w.w_left * out.value[j];
      if (j + 1 < k)
        contrib += w.w_right * out.value[j + 1];
      else
        w_unknown = w.w_right;
      const double adj = contrib - comp;
      const double s = known + adj;
      comp = (s - known) - adj;
      known = s;
    }
    const double denom = 1.0 - c * w_unknown;
    if (!(denom > 0.0))
      throw std::runtime_error("volterra: implicit step lost positivity");
    const double v = (1.0 + c * known) / denom;
    if (!(v > 0.0))
      throw std::runtime_error("volterra: implicit step lost positivity");
    out.value[k] = v;
  }
  return out;
}

}  // namespace

MomentCurve solve_volterra_bridge(double beta, double tau_max, int n_steps) {
  return solve_volterra(beta, tau_max, n_steps, bridge_panel, true);
}

MomentCurve solve_volterra_flat(double beta, double tau_max, int n_steps) {
  return solve_volterra(beta, tau_max, n_steps, flat_panel, false);
}

SmallTimeFirstOrder small_time_expansions(double beta, double tau) {
  check_beta_tau(beta, tau);
  const double y = beta * beta * std::sqrt(tau);
  return {1.0 + 0.5 * kSqrtPi * y, 1.0 + y / kSqrtPi};
}

std::string moment_curve_csv(const std::vector<MomentCurve>& curves) {
  std::string s = "tau,value,source,beta\n";
  char row[128];
  for (const MomentCurve& c : curves) {
    for (std::size_t i = 0; i < c.tau.size(); ++i) {
      std::snprintf(row, sizeof(row), "%.17g,%.17g,%s,%.17g\n", c.tau[i],
                    c.value[i], c.source.c_str(), c.beta);
      s += row;
    }
  }
  return s;
}

std::string moment_curve_csv(const MomentCurve& curve) {
  return moment_curve_csv(std::vector<MomentCurve>{curve});
}

}  // namespace shelab
