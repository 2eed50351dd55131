#pragma once

#include <string>
#include <vector>

namespace shelab {

struct MomentCurve {
  std::vector<double> tau;
  std::vector<double> value;
  std::string source;  // "closed" | "series" | "volterra"
  double beta = 1.0;
};

// Second moment of the normalized point-to-point partition function:
// m2(tau) = 1 + sqrt(pi b^4 tau) e^{b^4 tau / 4} Phi(b^2 sqrt(tau/2)).
double m2_closed(double beta, double tau);

// Second moment of the flat-data field at a point:
// g(t) = 2 e^{b^4 t / 4} Phi(b^2 sqrt(t/2)) = e^{b^4 t/4} erfc(-b^2 sqrt(t)/2).
double pam_m2_closed(double beta, double t);

// Coefficients c_n = sqrt(pi) / (2^n Gamma((n+1)/2)) via the ratio recurrence
// c_{n+1}/c_n = Gamma((n+1)/2) / (2 Gamma((n+2)/2)); c_0 = 1.
std::vector<double> picard_ladder(int n_max);

// Partial sum sum_{n<=N} c_n (b^4 tau)^{n/2}; switches to log-space
// accumulation if a term would leave the representable range.
double m2_series(double beta, double tau, int n_terms);

// Product-integration solvers on a uniform grid over [0, tau_max].
// The density is piecewise linear in sqrt(u) (matching the sqrt behavior
// of both solutions at zero) against exactly integrated singular weights;
// the endpoint panel is resolved implicitly (the kernel weights there are
// themselves singular but integrable). Throw std::runtime_error if an
// implicit step produces a non-positive value.
//
// bridge: m(tau) = 1 + (b^2 sqrt(tau) / (2 sqrt(pi)))
//                    * int_0^tau m(u) / sqrt(u (tau - u)) du
MomentCurve solve_volterra_bridge(double beta, double tau_max, int n_steps);
// flat:   g(tau) = 1 + (b^2 / (2 sqrt(pi))) * int_0^tau g(s) / sqrt(tau - s) ds
MomentCurve solve_volterra_flat(double beta, double tau_max, int n_steps);

struct SmallTimeFirstOrder {
  double bridge = 1.0;  // 1 + (sqrt(pi)/2) b^2 sqrt(tau)
  double flat = 1.0;    // 1 + b^2 sqrt(tau) / sqrt(pi)
};
SmallTimeFirstOrder small_time_expansions(double beta, double tau);

// Serialization: header "tau,value,source,beta", one row per grid point.
std::string moment_curve_csv(const MomentCurve& curve);
std::string moment_curve_csv(const std::vector<MomentCurve>& curves);

}  // namespace shelab
