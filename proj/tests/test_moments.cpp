#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "shelab/moments.hpp"
#include "shelab/special.hpp"

using namespace shelab;

namespace {
double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}
constexpr double kSqrtPiHalf = 0.88622692545275801;
constexpr double kInvSqrtPi = 0.56418958354775629;
}  // namespace

TEST_CASE("closed second moments") {
  CHECK(rel(m2_closed(1.0, 1.0), 2.7302344337037002) < 1e-13);
  CHECK(rel(pam_m2_closed(1.0, 1.0), 1.9523604891825571) < 1e-13);
  CHECK(rel(pam_m2_closed(1.0, 0.25), 1.3586423701047221) < 1e-13);
  CHECK(m2_closed(1.0, 0.0) == 1.0);
  CHECK(pam_m2_closed(1.0, 0.0) == 1.0);
  CHECK(m2_closed(0.0, 2.0) == 1.0);

  // coupling enters only through beta^4 tau
  CHECK(rel(m2_closed(2.0, 1.0), m2_closed(1.0, 16.0)) < 1e-13);

  double prev_m2 = 1.0, prev_g = 1.0;
  for (double tau : {0.1, 0.3, 0.8, 1.5, 3.0}) {
    const double m2 = m2_closed(1.0, tau), g = pam_m2_closed(1.0, tau);
    CHECK(m2 > prev_m2);
    CHECK(g > prev_g);
    CHECK(m2 > g);  // point-to-point moment dominates the flat-data one
    prev_m2 = m2;
    prev_g = g;
  }
  CHECK_THROWS_AS(m2_closed(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(pam_m2_closed(1.0, -0.5), std::domain_error);
}

TEST_CASE("series coefficients") {
  const auto c = picard_ladder(30);
  REQUIRE(c.size() == 31);
  CHECK(c[0] == 1.0);
  CHECK(rel(c[1], kSqrtPiHalf) < 1e-15);
  CHECK(rel(c[2], 0.5) < 1e-15);
  CHECK(rel(c[3], 0.2215567313631895) < 1e-15);
  for (int n = 0; n <= 30; ++n) {
    const double direct =
        kSqrtPiHalf * 2.0 / (std::pow(2.0, n) * gamma_fn(0.5 * (n + 1)));
    CHECK(rel(c[n], direct) < 1e-12);
    if (n > 0) {
      CHECK(c[n] > 0.0);
      CHECK(c[n] < c[n - 1]);
    }
  }
  CHECK_THROWS_AS(picard_ladder(-1), std::domain_error);
}

TEST_CASE("series partial sums reach the closed form") {
  for (double beta : {0.5, 1.0, 1.5})
    for (double tau : {0.05, 0.5, 1.0, 2.0, 4.0})
      CHECK(rel(m2_series(beta, tau, 60), m2_closed(beta, tau)) < 1e-9);
  // large argument goes through log-space accumulation
  CHECK(rel(m2_series(1.0, 400.0, 400), m2_closed(1.0, 400.0)) < 1e-8);
}

TEST_CASE("bridge equation solver") {
  const auto curve = solve_volterra_bridge(1.0, 1.0, 1024);
  REQUIRE(curve.tau.size() == curve.value.size());
  CHECK(curve.source == "volterra");
  CHECK(curve.beta == 1.0);
  CHECK(curve.value.front() == 1.0);
  CHECK(curve.tau.front() == 0.0);
  CHECK(curve.tau.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rel(curve.value.back(), m2_closed(1.0, 1.0)) < 1e-3);
  for (std::size_t i = 1; i < curve.value.size(); ++i)
    CHECK(curve.value[i] >= curve.value[i - 1]);

  const auto coarse = solve_volterra_bridge(1.0, 1.0, 512);
  const double e_c = std::abs(coarse.value.back() - m2_closed(1.0, 1.0));
  const double e_f = std::abs(curve.value.back() - m2_closed(1.0, 1.0));
  CHECK(e_c / e_f > 1.7);  // at least first order in the step

  CHECK_THROWS_AS(solve_volterra_bridge(1.0, 0.0, 64), std::domain_error);
  CHECK_THROWS_AS(solve_volterra_bridge(1.0, 1.0, 1), std::domain_error);
}

TEST_CASE("flat equation solver and domination") {
  const auto flat = solve_volterra_flat(1.0, 1.0, 1024);
  CHECK(rel(flat.value.back(), pam_m2_closed(1.0, 1.0)) < 1e-3);

  const auto coarse = solve_volterra_flat(1.0, 1.0, 512);
  const double e_c = std::abs(coarse.value.back() - pam_m2_closed(1.0, 1.0));
  const double e_f = std::abs(flat.value.back() - pam_m2_closed(1.0, 1.0));
  CHECK(e_c / e_f > 1.7);

  const auto bridge = solve_volterra_bridge(1.0, 1.0, 512);
  const auto flat5 = solve_volterra_flat(1.0, 1.0, 512);
  for (std::size_t i = 1; i < flat5.value.size(); ++i)
    CHECK(bridge.value[i] - flat5.value[i] > 1e-4);
}

TEST_CASE("small time expansions") {
  const double tau = 1e-6, beta = 1.3;
  const auto st = small_time_expansions(beta, tau);
  const double b2rt = beta * beta * std::sqrt(tau);
  CHECK(rel(st.bridge, 1.0 + kSqrtPiHalf * b2rt) < 1e-14);
  CHECK(rel(st.flat, 1.0 + kInvSqrtPi * b2rt) < 1e-14);
  // and they really are the leading behavior of the closed forms
  CHECK(rel(m2_closed(beta, tau) - 1.0, st.bridge - 1.0) < 2e-3);
  CHECK(rel(pam_m2_closed(beta, tau) - 1.0, st.flat - 1.0) < 2e-3);
}

TEST_CASE("curve serialization") {
  auto curve = solve_volterra_flat(1.0, 0.5, 8);
  const std::string csv = moment_curve_csv(curve);
  CHECK(csv.rfind("tau,value,source,beta", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == curve.tau.size() + 1);

  double tau0 = -1.0, val0 = -1.0;
  char src[32] = {0};
  double b = -1.0;
  const std::size_t first = csv.find('\n') + 1;
  REQUIRE(std::sscanf(csv.c_str() + first, "%lf,%lf,%31[^,],%lf", &tau0, &val0,
                      src, &b) == 4);
  CHECK(tau0 == 0.0);
  CHECK(val0 == 1.0);
  CHECK(std::string(src) == "volterra");
  CHECK(b == 1.0);

  const auto both = moment_curve_csv(std::vector<MomentCurve>{curve, curve});
  std::size_t lines2 = 0;
  for (char ch : both)
    if (ch == '\n') ++lines2;
  CHECK(lines2 == 2 * curve.tau.size() + 1);
}
