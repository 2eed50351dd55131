#pragma once

#include <vector>

namespace shelab {

// Profiles on the (t, x) plane for exact sheared inner products
// <f, g_sheared> = integral of f(t,x) g(t, x - nu (t - r)) dt dx.
// Two closed-form families: axis-aligned box indicators and finite sums of
// separable Gaussian bumps. Both are closed under the shear.

struct BoxProfile {
  double t0 = 0.0, t1 = 1.0;
  double x0 = 0.0, x1 = 1.0;
  double amplitude = 1.0;
};

struct GaussianTerm {
  double amplitude = 1.0;
  double mu_t = 0.0, mu_x = 0.0;
  double sigma_t = 1.0, sigma_x = 1.0;
};

struct Profile {
  enum class Kind { box, gaussian_sum };
  Kind kind = Kind::box;
  BoxProfile box;
  std::vector<GaussianTerm> terms;

  static Profile make_box(double t0, double t1, double x0, double x1,
                          double amplitude = 1.0);
  static Profile make_gaussians(std::vector<GaussianTerm> terms);
};

// Exact evaluation, no quadrature. Throws std::invalid_argument for
// degenerate profiles or mismatched kinds (box against gaussian_sum).
double shear_inner_product(const Profile& f, const Profile& g, double r,
                           double nu);

}  // namespace shelab
