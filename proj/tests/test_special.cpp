#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "shelab/special.hpp"

using namespace shelab;

namespace {
double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}
}  // namespace

TEST_CASE("gamma function") {
  CHECK(rel(gamma_fn(0.5), 1.7724538509055160) < 1e-14);
  CHECK(rel(gamma_fn(1.0), 1.0) < 1e-14);
  CHECK(rel(gamma_fn(2.0), 1.0) < 1e-14);
  CHECK(rel(gamma_fn(5.0), 24.0) < 1e-14);
  CHECK(rel(gamma_fn(7.5), 1871.2543057977883) < 1e-13);
  for (double x = 0.1; x < 30.0; x += 0.37)
    CHECK(rel(gamma_fn(x), std::tgamma(x)) < 1e-12);
  // recurrence
  for (double x : {0.3, 1.7, 6.2})
    CHECK(rel(gamma_fn(x + 1.0), x * gamma_fn(x)) < 1e-13);
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("log gamma stays accurate when gamma overflows") {
  for (double x : {0.5, 1.5, 10.0, 100.0, 500.0, 1e4})
    CHECK(rel(log_gamma_fn(x), std::lgamma(x)) < 1e-12);
  CHECK_THROWS_AS(log_gamma_fn(-2.0), std::domain_error);
}

TEST_CASE("beta function") {
  CHECK(rel(beta_fn(1.5, 0.5), 1.5707963267948966) < 1e-13);
  CHECK(rel(beta_fn(2.0, 3.0), 1.0 / 12.0) < 1e-13);
  for (const auto& [a, b] : {std::pair{0.4, 2.3}, std::pair{5.0, 0.7}})
    CHECK(rel(beta_fn(a, b), beta_fn(b, a)) < 1e-13);
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), std::domain_error);
}

TEST_CASE("two-parameter power series") {
  const auto a = mittag_leffler_series(0.5, 0.5, 0.5);
  CHECK(a.converged);
  CHECK(a.terms > 5);
  CHECK(rel(a.value, 1.5403698281390348) < 1e-12);

  const auto b = mittag_leffler_series(0.5, 1.0, 1.0);
  CHECK(b.converged);
  CHECK(rel(b.value, 5.0089800807622835) < 1e-12);

  const auto c = mittag_leffler_series(1.0, 1.0, 1.0);
  CHECK(rel(c.value, 2.7182818284590452) < 1e-13);

  // too small a budget for a large argument must be flagged, not guessed
  const auto d = mittag_leffler_series(0.5, 0.5, 30.0, 50);
  CHECK_FALSE(d.converged);

  CHECK_THROWS_AS(mittag_leffler_series(-0.5, 0.5, 1.0), std::domain_error);
}

TEST_CASE("closed forms agree with the series") {
  for (double z : {-2.0, -0.7, 0.3, 1.0, 2.0}) {
    const auto s_half = mittag_leffler_series(0.5, 0.5, z);
    CHECK(s_half.converged);
    CHECK(rel(mittag_leffler({0.5, 0.5, z}), s_half.value) < 1e-11);
    const auto s_one = mittag_leffler_series(0.5, 1.0, z);
    CHECK(rel(mittag_leffler({0.5, 1.0, z}), s_one.value) < 1e-11);
  }
  // alpha = 1 falls back to the series and reproduces exp
  CHECK(rel(mittag_leffler({1.0, 1.0, 1.0}), 2.7182818284590452) < 1e-12);
  // a fallback that cannot converge in budget refuses loudly
  CHECK_THROWS_AS(mittag_leffler({0.25, 1.0, 8.0}), std::runtime_error);
}
