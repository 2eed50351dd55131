#pragma once

#include <functional>

namespace shelab {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_segments = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b]. Bisects the worst segment until
// the summed error estimate meets max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Convenience for integrands concentrated around a Gaussian bump:
// integrates over [center - 12*sigma, center + 12*sigma].
QuadResult integrate_windowed(const std::function<double(double)>& f,
                              double center, double sigma,
                              const QuadOptions& opts = {});

}  // namespace shelab
