#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "shelab/ensemble.hpp"
#include "shelab/estimators.hpp"
#include "shelab/quadrature.hpp"
#include "shelab/shear.hpp"
#include "shelab/spde.hpp"

using namespace shelab;

namespace {
double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}
EnsembleConfig quick_config() {
  EnsembleConfig cfg;
  cfg.grid = {2.0, 0.05, 2e-3, 1.0};  // 80 cells
  cfg.beta = 1.0;
  cfg.seed = 314159;
  cfg.n_samples = 800;
  return cfg;
}
}  // namespace

TEST_CASE("moment estimator arithmetic on a fixed matrix") {
  SampleMatrix m{{1.0, 2.0, 3.0, 4.0}, 1};
  auto cfg = quick_config();
  cfg.n_samples = 4;
  const Estimate p2 = moment_from_column(m, 0, 0.5, 0.0, 2, cfg);
  CHECK(p2.estimate == 7.5);  // (1+4+9+16)/4
  CHECK(rel(p2.std_error, 3.2787192621510585) < 1e-13);
  CHECK(p2.label == "field_moment");
  CHECK(p2.n_samples == 4);

  const Estimate p1 = moment_from_column(m, 0, 0.5, 0.0, 1, cfg);
  CHECK(p1.estimate == 2.5);
  CHECK(rel(p1.std_error, 0.6454972243679028) < 1e-14);

  const Estimate p0 = estimate_moment(0.5, 0.0, 0, cfg);
  CHECK(p0.estimate == 1.0);
  CHECK(p0.std_error == 0.0);
  CHECK_THROWS_AS(moment_from_column(m, 0, 0.5, 0.0, -1, cfg),
                  std::domain_error);
}

TEST_CASE("inverse-moment estimator arithmetic on a fixed matrix") {
  SampleMatrix m{{0.5, 2.0, 0.5, 2.0}, 1};
  auto cfg = quick_config();
  cfg.n_samples = 4;
  const KappaEstimate k = kappa_from_column(m, 0, 0.5, cfg);
  CHECK(k.kappa_star.estimate == 1.25);
  CHECK(rel(k.kappa_star.std_error, 0.4330127018922193) < 1e-14);
  CHECK(k.mean_sq_dev.estimate == 0.625);
  CHECK(rel(k.mean_sq_dev.std_error, 0.21650635094610965) < 1e-14);
  CHECK(k.kappa == 1.5625);
  CHECK(rel(k.kappa_std_error, 1.0825317547305483) < 1e-14);
  CHECK(rel(k.z_vs_one, 0.57735026918962584) < 1e-14);
  CHECK(k.max_inverse == 2.0);
  CHECK(k.kappa_star.label == "inverse_moment");
  CHECK(k.mean_sq_dev.label == "mean_square_deviation");

  // -(v-1)^3/v per sample: {0.25, -0.5, 0.25, -0.5}; this column has sample
  // mean 1.25, so the estimate is the identity gap -0.375 plus that 0.25
  CHECK(k.smalltime_gap.estimate == -0.125);
  CHECK(rel(k.smalltime_gap.std_error, 0.21650635094610965) < 1e-14);
  CHECK(k.smalltime_gap.label == "smalltime_gap");
}

TEST_CASE("height covariance arithmetic on a fixed matrix") {
  const double e = 2.7182818284590452;
  SampleMatrix m{{1.0 / e, 1.0 / (e * e), e, e * e, 1.0 / e, e * e, e,
                  1.0 / (e * e)},
                 2};
  // log columns: h0 = {-1, 1, -1, 1}, h1 = {-2, 2, 2, -2}
  const std::vector<double> offsets{0.0, 1.0};
  const std::vector<std::size_t> cols{0, 1};
  const auto pts = cov_h_from_columns(m, 0, offsets, cols);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].x == 0.0);
  CHECK(rel(pts[0].cov, 4.0 / 3.0) < 1e-13);  // variance at the origin
  CHECK(pts[0].std_error < 1e-13);
  CHECK(pts[0].reliable);
  CHECK(std::abs(pts[1].cov) < 1e-13);  // orthogonal columns
  CHECK(rel(pts[1].std_error, 1.1547005383792515) < 1e-13);
  CHECK_FALSE(pts[1].reliable);

  std::vector<std::size_t> wrong{0};
  CHECK_THROWS_AS(cov_h_from_columns(m, 0, offsets, wrong),
                  std::invalid_argument);
}

TEST_CASE("paired log-covariance difference on a fixed matrix") {
  // log columns: a = {1, 2, 3, 4}, b = {2, 1, 0, -1}, o = {1, 0, 2, 1}
  SampleMatrix m;
  m.width = 3;
  const double la[] = {1, 2, 3, 4}, lb[] = {2, 1, 0, -1}, lo[] = {1, 0, 2, 1};
  for (int i = 0; i < 4; ++i) {
    m.data.push_back(std::exp(la[i]));
    m.data.push_back(std::exp(lb[i]));
    m.data.push_back(std::exp(lo[i]));
  }
  const CovWithError d = cov_of_log_diff(m, 0, 1, 2);
  CHECK(rel(d.cov, 2.0 / 3.0) < 1e-13);
  CHECK(rel(d.std_error, 0.28867513459481287) < 1e-13);  // sqrt(1/12)

  // bilinearity: equals the difference of the one-sided covariances
  const std::vector<double> offsets{1.0, -1.0};
  const std::vector<std::size_t> cols{0, 1};
  const auto pts = cov_h_from_columns(m, 2, offsets, cols);
  CHECK(rel(d.cov, pts[0].cov - pts[1].cov) < 1e-13);

  SampleMatrix tiny{{1.0, 2.0, 3.0}, 3};
  CHECK_THROWS_AS(cov_of_log_diff(tiny, 0, 1, 2), std::invalid_argument);
}

TEST_CASE("flat ensemble layout and reproducibility") {
  auto cfg = quick_config();
  cfg.n_samples = 16;
  const std::vector<double> times{0.1, 0.3};
  const std::vector<double> xs{-0.5, 0.0, 1.0};
  const SampleMatrix m = flat_field_samples(cfg, times, xs);
  CHECK(m.width == 6);
  CHECK(m.rows() == 16);

  // column layout: replicate sample 5 by hand
  Simulator sim(cfg.grid, cfg.beta, cfg.seed);
  FieldState f = sim.flat_state(0.0);
  sim.advance(f, 5, 0.1);
  CHECK(m.data[5 * 6 + 2] == f.values[cfg.grid.index_of(1.0)]);
  sim.advance(f, 5, 0.3);
  CHECK(m.data[5 * 6 + 3] == f.values[cfg.grid.index_of(-0.5)]);

  // any worker layout produces the same matrix
  setenv("SHELAB_WORKERS", "4", 1);
  const SampleMatrix m4 = flat_field_samples(cfg, times, xs);
  setenv("SHELAB_WORKERS", "1", 1);
  const SampleMatrix m1 = flat_field_samples(cfg, times, xs);
  unsetenv("SHELAB_WORKERS");
  CHECK(m.data == m4.data);
  CHECK(m.data == m1.data);

  const std::vector<double> bad{0.3, 0.1};
  CHECK_THROWS_AS(flat_field_samples(cfg, bad, xs), std::invalid_argument);
  CHECK_THROWS_AS(flat_field_samples(cfg, times, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("zero coupling collapses every ratio statistic") {
  auto cfg = quick_config();
  cfg.beta = 0.0;
  cfg.n_samples = 12;

  const KappaEstimate k = estimate_kappa(0.3, cfg);
  CHECK(std::abs(k.kappa_star.estimate - 1.0) < 1e-12);
  CHECK(k.mean_sq_dev.estimate < 1e-22);
  CHECK(std::abs(k.smalltime_gap.estimate) < 1e-22);
  CHECK(k.kappa == k.kappa_star.estimate * k.kappa_star.estimate);
  CHECK(std::abs(k.max_inverse - 1.0) < 1e-12);

  const GreenM2Estimate g = estimate_normalized_green_m2(0.3, cfg);
  CHECK(g.m2.estimate == 1.0);  // identical arithmetic path as the normalizer
  CHECK(g.m2.std_error == 0.0);
  CHECK(g.mean_one.estimate == 1.0);

  const Estimate b = estimate_b_tilde(0.3, 0.01, 0.5, -0.5, cfg);
  CHECK(std::abs(b.estimate - 1.0) < 1e-12);
  CHECK(b.std_error < 1e-12);

  // every sample is the same deterministic path, so the spread vanishes
  const std::vector<double> offsets{0.0, 0.5};
  const auto pts = estimate_cov_h(0.3, offsets, cfg);
  CHECK(pts[0].cov == 0.0);
  CHECK(pts[1].cov == 0.0);
  CHECK(pts[1].std_error == 0.0);
}

TEST_CASE("driven covariance at the origin is a reliable variance") {
  auto cfg = quick_config();
  const std::vector<double> offsets{-0.5, 0.0, 0.5};
  const auto pts = estimate_cov_h(0.2, offsets, cfg);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].x == 0.0);
  CHECK(pts[1].cov > 0.0);
  CHECK(pts[1].reliable);
  // mirror offsets agree within sampling noise
  const double gap = std::abs(pts[0].cov - pts[2].cov);
  CHECK(gap < 5.0 * std::hypot(pts[0].std_error, pts[2].std_error));

  const std::vector<double> no_origin{0.5, 1.0};
  CHECK_THROWS_AS(estimate_cov_h(0.2, no_origin, cfg), std::invalid_argument);
}

TEST_CASE("coupled-run ratio bookkeeping") {
  auto cfg = quick_config();
  cfg.n_samples = 60;
  const std::vector<double> seps{1.0, 2.0};
  const auto prof = b_tilde_profile(0.5, 0.01, seps, cfg);
  REQUIRE(prof.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(prof[j].label == "boundary_layer_ratio");
    double x = 0.0, y = 0.0;
    for (const auto& [k, v] : prof[j].params) {
      if (k == "x") x = v;
      if (k == "y") y = v;
    }
    CHECK(x == 0.5 * seps[j]);
    CHECK(y == -0.5 * seps[j]);
    CHECK(prof[j].estimate > 0.0);
  }
  // single-separation path reproduces the profile entry
  const Estimate solo = estimate_b_tilde(0.5, 0.01, 0.5, -0.5, cfg);
  const auto prof1 =
      b_tilde_profile(0.5, 0.01, std::vector<double>{1.0}, cfg);
  CHECK(solo.estimate == doctest::Approx(prof1[0].estimate).epsilon(1e-12));

  CHECK_THROWS_AS(b_tilde_profile(0.5, 0.6, seps, cfg), std::domain_error);
  CHECK_THROWS_AS(b_tilde_profile(0.5, 0.01, std::vector<double>{}, cfg),
                  std::invalid_argument);
}

TEST_CASE("estimate serialization") {
  auto cfg = quick_config();
  cfg.n_samples = 4;
  SampleMatrix m{{1.0, 2.0, 3.0, 4.0}, 1};
  std::vector<Estimate> es;
  es.push_back(moment_from_column(m, 0, 0.5, 0.0, 2, cfg));
  es.push_back(moment_from_column(m, 0, 0.5, 0.0, 1, cfg));
  const auto j = nlohmann::json::parse(estimates_json(es));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["label"] == "field_moment");
  CHECK(j[0]["estimate"].get<double>() == 7.5);
  CHECK(j[0]["params"]["p"].get<double>() == 2.0);
  CHECK(j[0]["n_samples"].get<std::size_t>() == 4);
  CHECK(j[0]["grid"]["dx"].get<double>() == cfg.grid.dx);
  // the fixed matrix is noisy relative to its mean
  CHECK(j[0]["low_precision"].get<bool>() ==
        (es[0].std_error > 0.1 * std::abs(es[0].estimate)));
}

TEST_CASE("box profiles shear to exact overlaps") {
  const Profile f = Profile::make_box(0.0, 1.0, 0.0, 1.0);
  CHECK(std::abs(shear_inner_product(f, f, 0.0, 0.0) - 1.0) < 1e-15);
  for (double nu : {1.0, 1.5, 2.0, 4.0, 8.0, 16.0})
    CHECK(rel(shear_inner_product(f, f, 0.0, nu), 0.5 / nu) < 1e-13);
  // below the critical slope nothing vanishes: 1 - nu/2
  CHECK(rel(shear_inner_product(f, f, 0.0, 0.5), 0.75) < 1e-14);
  // pivoting around r = 1 mirrors the ramp
  CHECK(rel(shear_inner_product(f, f, 1.0, 2.0), 0.25) < 1e-13);
  // bilinear in the amplitudes
  const Profile f2 = Profile::make_box(0.0, 1.0, 0.0, 1.0, 2.0);
  const Profile f3 = Profile::make_box(0.0, 1.0, 0.0, 1.0, 3.0);
  CHECK(rel(shear_inner_product(f2, f3, 0.0, 2.0), 6.0 * 0.25) < 1e-13);
  // disjoint time windows never meet
  const Profile late = Profile::make_box(2.0, 3.0, 0.0, 1.0);
  CHECK(shear_inner_product(f, late, 0.0, 5.0) == 0.0);

  // a distant box dragged through the window: hand-computed 1/12
  const Profile far = Profile::make_box(0.0, 1.0, 10.0, 11.0);
  CHECK(rel(shear_inner_product(f, far, 0.0, 10.5), 1.0 / 12.0) < 1e-12);
  // sheared the other way it drifts further off and never meets
  CHECK(shear_inner_product(f, far, 0.0, -10.5) == 0.0);

  CHECK_THROWS_AS(
      shear_inner_product(Profile::make_box(1.0, 0.0, 0.0, 1.0), f, 0.0, 1.0),
      std::invalid_argument);
}

TEST_CASE("gaussian profiles shear in closed form") {
  const Profile g = Profile::make_gaussians({{1.0, 0.0, 0.0, 1.0, 1.0}});
  // <g, g> with no shear is pi for the unit bump
  CHECK(rel(shear_inner_product(g, g, 0.0, 0.0), 3.1415926535897932) < 1e-14);

  // frozen two-dimensional quadrature reference for an asymmetric pair
  const Profile fa =
      Profile::make_gaussians({{1.3, 0.2, -0.4, 0.7, 1.1}});
  const Profile fb =
      Profile::make_gaussians({{0.9, -0.1, 0.5, 0.5, 0.8}});
  CHECK(rel(shear_inner_product(fa, fb, 0.3, 1.7), 1.0606076106990630) <
        1e-12);

  // independent in-test quadrature at another pivot and slope
  const double r = -0.2, nu = 1.0;
  const std::function<double(double)> outer = [&](double t) {
    const auto inner = integrate_windowed(
        [&](double x) {
          const double va =
              1.3 * std::exp(-0.5 * std::pow((t - 0.2) / 0.7, 2) -
                             0.5 * std::pow((x + 0.4) / 1.1, 2));
          const double arg = x + nu * (t - r);
          const double vb =
              0.9 * std::exp(-0.5 * std::pow((t + 0.1) / 0.5, 2) -
                             0.5 * std::pow((arg - 0.5) / 0.8, 2));
          return va * vb;
        },
        0.0, 4.0, QuadOptions{0.0, 1e-11, 4000});
    return inner.value;
  };
  const auto ref = integrate(outer, -4.0, 4.0, QuadOptions{0.0, 1e-10, 4000});
  CHECK(rel(shear_inner_product(fa, fb, r, nu), ref.value) < 1e-8);

  // sums expand bilinearly
  const Profile sum = Profile::make_gaussians(
      {{1.3, 0.2, -0.4, 0.7, 1.1}, {0.9, -0.1, 0.5, 0.5, 0.8}});
  const double direct = shear_inner_product(sum, sum, 0.3, 1.7);
  const double parts = shear_inner_product(fa, fa, 0.3, 1.7) +
                       shear_inner_product(fb, fb, 0.3, 1.7) +
                       shear_inner_product(fa, fb, 0.3, 1.7) +
                       shear_inner_product(fb, fa, 0.3, 1.7);
  CHECK(rel(direct, parts) < 1e-12);

  // strong shear drives the overlap to zero
  const Profile bump = Profile::make_gaussians({{1.0, 1.0, 0.0, 0.05, 1.0}});
  CHECK(shear_inner_product(bump, bump, 0.0, 50.0) < 1e-8);

  CHECK_THROWS_AS(shear_inner_product(g, Profile::make_box(0, 1, 0, 1), 0.0,
                                      1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      Profile::make_gaussians({{1.0, 0.0, 0.0, -1.0, 1.0}}),
      std::invalid_argument);
}
