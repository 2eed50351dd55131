#pragma once

namespace shelab {

// Lanczos approximation (g = 7, 9 coefficients). Positive arguments only.
double gamma_fn(double x);
double log_gamma_fn(double x);

// beta_fn(a, b) = gamma_fn(a) gamma_fn(b) / gamma_fn(a+b), a, b > 0.
double beta_fn(double a, double b);

struct MittagLefflerParams {
  double alpha = 0.5;
  double beta = 0.5;
  double z = 0.0;
};

struct SeriesValue {
  double value = 0.0;
  double abs_error = 0.0;
  int terms = 0;
  bool converged = false;
};

// Power series sum_{n>=0} z^n / gamma_fn(alpha n + beta), compensated
// summation, fixed term budget. Flags non-convergence instead of guessing.
SeriesValue mittag_leffler_series(double alpha, double beta, double z,
                                  int max_terms = 500);

// Production evaluation. For alpha = 1/2 and beta in {1/2, 1} uses the
// closed forms E_{1/2,1}(z) = e^{z^2} erfc(-z) and
// E_{1/2,1/2}(z) = 1/sqrt(pi) + z E_{1/2,1}(z); otherwise falls back to the
// series and throws std::runtime_error if it fails to converge.
double mittag_leffler(const MittagLefflerParams& p);

}  // namespace shelab
