#include "shelab/shear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shelab {
namespace {

void validate_box(const BoxProfile& b) {
  if (!(b.t1 >= b.t0) || !(b.x1 >= b.x0) || !std::isfinite(b.amplitude))
    throw std::invalid_argument("shear_inner_product: malformed box");
}

void validate_gaussians(const std::vector<GaussianTerm>& terms) {
  if (terms.empty())
    throw std::invalid_argument("shear_inner_product: empty gaussian sum");
  for (const GaussianTerm& g : terms)
    if (!(g.sigma_t > 0.0) || !(g.sigma_x > 0.0))
      throw std::invalid_argument("shear_inner_product: sigma must be > 0");
}

// overlap length of [f.x0, f.x1] with the g box read at x + nu (t - r),
// i.e. the g support displaced by -nu (t - r)
double box_pair(const BoxProfile& f, const BoxProfile& g, double r,
                double nu) {
  const double tlo = std::max(f.t0, g.t0);
  const double thi = std::min(f.t1, g.t1);
  if (thi <= tlo) return 0.0;

  const auto phi = [&](double t) {
    const double d = nu * (t - r);
    return std::min(f.x1, g.x1 - d) - std::max(f.x0, g.x0 - d);
  };

  std::vector<double> knots = {tlo, thi};
  if (nu != 0.0) {
    const double cands[] = {r + (g.x1 - f.x1) / nu, r + (g.x0 - f.x0) / nu,
                            r + (g.x0 - f.x1) / nu, r + (g.x1 - f.x0) / nu};
    for (double c : cands)
      if (c > tlo && c < thi) knots.push_back(c);
  }
  std::sort(knots.begin(), knots.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    if (b <= a) continue;
    double pa = phi(a), pb = phi(b);
    if (pa <= 0.0 && pb <= 0.0) continue;
    if (pa >= 0.0 && pb >= 0.0) {
      total += 0.5 * (pa + pb) * (b - a);
      continue;
    }
    // phi is linear on the panel; integrate its positive part only
    const double tz = a + (b - a) * pa / (pa - pb);
    if (pa > 0.0)
      total += 0.5 * pa * (tz - a);
    else
      total += 0.5 * pb * (b - tz);
  }
  return f.amplitude * g.amplitude * total;
}

// x-integral of the two bumps leaves a Gaussian in t whose center distance
// is k + nu t with k = mu_x^f - mu_x^g - nu r (the second bump is read at
// x + nu (t - r))
double gaussian_pair(const GaussianTerm& f, const GaussianTerm& g, double r,
                     double nu) {
  const double s2 = f.sigma_x * f.sigma_x + g.sigma_x * g.sigma_x;
  const double k = f.mu_x - g.mu_x - nu * r;
  const double q2 = 1.0 / (f.sigma_t * f.sigma_t) +
                    1.0 / (g.sigma_t * g.sigma_t) + nu * nu / s2;
  const double q1 = -2.0 * (f.mu_t / (f.sigma_t * f.sigma_t) +
                            g.mu_t / (g.sigma_t * g.sigma_t) - k * nu / s2);
  const double q0 = f.mu_t * f.mu_t / (f.sigma_t * f.sigma_t) +
                    g.mu_t * g.mu_t / (g.sigma_t * g.sigma_t) + k * k / s2;
  const double expo = -0.5 * (q0 - q1 * q1 / (4.0 * q2));
  const double two_pi = 2.0 * std::numbers::pi;
  const double x_part = std::sqrt(two_pi / s2) * f.sigma_x * g.sigma_x;
  const double t_part = std::sqrt(two_pi / q2);
  return f.amplitude * g.amplitude * x_part * t_part * std::exp(expo);
}

}  // namespace

Profile Profile::make_box(double t0, double t1, double x0, double x1,
                          double amplitude) {
  Profile p;
  p.kind = Kind::box;
  p.box = {t0, t1, x0, x1, amplitude};
  validate_box(p.box);
  return p;
}

Profile Profile::make_gaussians(std::vector<GaussianTerm> terms) {
  Profile p;
  p.kind = Kind::gaussian_sum;
  p.terms = std::move(terms);
  validate_gaussians(p.terms);
  return p;
}

double shear_inner_product(const Profile& f, const Profile& g, double r,
                           double nu) {
  if (f.kind != g.kind)
    throw std::invalid_argument(
        "shear_inner_product: profiles must share a kind");
  if (f.kind == Profile::Kind::box) {
    validate_box(f.box);
    validate_box(g.box);
    return box_pair(f.box, g.box, r, nu);
  }
  validate_gaussians(f.terms);
  validate_gaussians(g.terms);
  double total = 0.0;
  for (const GaussianTerm& a : f.terms)
    for (const GaussianTerm& b : g.terms) total += gaussian_pair(a, b, r, nu);
  return total;
}

}  // namespace shelab
