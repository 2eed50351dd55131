#include "shelab/suites.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "shelab/kernels.hpp"
#include "shelab/moments.hpp"
#include "shelab/quadrature.hpp"
#include "shelab/report.hpp"
#include "shelab/shear.hpp"
#include "shelab/special.hpp"

namespace shelab {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckRow two_sided(std::string id, std::string claim, double observed,
                   double expected, double tolerance, std::string details,
                   double std_error = 0.0) {
  CheckRow r;
  r.id = std::move(id);
  r.claim = std::move(claim);
  r.observed = observed;
  r.expected = expected;
  r.tolerance = tolerance;
  r.std_error = std_error;
  r.passed = std::abs(observed - expected) <= tolerance;
  r.details = std::move(details);
  return r;
}

CheckRow bound_above(std::string id, std::string claim, double observed,
                     double bound, std::string details,
                     double std_error = 0.0) {
  CheckRow r;
  r.id = std::move(id);
  r.claim = std::move(claim);
  r.observed = observed;
  r.expected = bound;
  r.tolerance = 0.0;
  r.std_error = std_error;
  r.passed = observed <= bound;
  r.details = std::move(details);
  return r;
}

CheckRow bound_below(std::string id, std::string claim, double observed,
                     double bound, std::string details,
                     double std_error = 0.0) {
  CheckRow r;
  r.id = std::move(id);
  r.claim = std::move(claim);
  r.observed = observed;
  r.expected = bound;
  r.tolerance = 0.0;
  r.std_error = std_error;
  r.passed = observed >= bound;
  r.details = std::move(details);
  return r;
}

EnsembleConfig ensemble_of(const RunConfig& cfg, std::uint64_t seed_shift,
                           std::uint64_t n_samples) {
  EnsembleConfig e;
  e.grid = cfg.grid();
  e.beta = cfg.beta;
  e.seed = cfg.seed + seed_shift;
  e.n_samples = n_samples;
  return e;
}

}  // namespace

bool SuiteReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.passed; });
}

const CheckRow* SuiteReport::find(const std::string& id) const {
  for (const CheckRow& r : rows)
    if (r.id == id) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------
// shared ensembles

SharedEnsembles::SharedEnsembles(const RunConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const double t = cfg_.t;
  for (double cand : {0.02, 0.05, 0.1})
    if (cand < t - 1e-12) ladder_.push_back(cand);
  if (ladder_.size() < 3) ladder_ = {t / 8.0, t / 4.0, t / 2.0};
  times_ = ladder_;
  if (t - 0.01 > 1e-12) times_.push_back(t - 0.01);
  times_.push_back(t);
  std::sort(times_.begin(), times_.end());
  times_.erase(std::unique(times_.begin(), times_.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-12;
                           }),
               times_.end());

  const GridSpec grid = cfg_.grid();
  const double sq = std::sqrt(t);
  std::vector<double> ladder;
  for (double p : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0}) {
    const double snapped = grid.x_of(grid.index_of(p * sq));
    if (snapped > 0.0) ladder.push_back(snapped);
  }
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
  for (auto it = ladder.rbegin(); it != ladder.rend(); ++it)
    offsets_.push_back(-*it);
  offsets_.push_back(0.0);
  for (double p : ladder) offsets_.push_back(p);
}

SharedEnsembles::~SharedEnsembles() = default;

std::size_t SharedEnsembles::column(double time, double offset) const {
  std::size_t ti = times_.size(), oi = offsets_.size();
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (std::abs(times_[i] - time) < 1e-12) ti = i;
  for (std::size_t i = 0; i < offsets_.size(); ++i)
    if (std::abs(offsets_[i] - offset) < 1e-12) oi = i;
  if (ti == times_.size() || oi == offsets_.size())
    throw std::logic_error("SharedEnsembles: no column for requested point");
  return ti * offsets_.size() + oi;
}

const SampleMatrix& SharedEnsembles::flat() {
  if (!flat_) {
    const EnsembleConfig e = ensemble_of(cfg_, 0, cfg_.n_samples);
    flat_ = flat_field_samples(e, times_, offsets_);
  }
  return *flat_;
}

const Estimate& SharedEnsembles::pam_refined() {
  if (!pam_refined_) {
    EnsembleConfig e =
        ensemble_of(cfg_, 12, std::max<std::uint64_t>(2, cfg_.n_samples / 4));
    e.grid.dx = cfg_.dx / 2.0;
    const double times[] = {cfg_.t};
    const double xs[] = {0.0};
    const SampleMatrix m = flat_field_samples(e, times, xs);
    pam_refined_ = moment_from_column(m, 0, cfg_.t, 0.0, 2, e);
  }
  return *pam_refined_;
}

const GreenM2Estimate& SharedEnsembles::green() {
  if (!green_) {
    const EnsembleConfig e = ensemble_of(cfg_, 11, cfg_.n_samples);
    green_ = estimate_normalized_green_m2(cfg_.t, e);
  }
  return *green_;
}

const GreenM2Estimate& SharedEnsembles::green_refined() {
  if (!green_refined_) {
    EnsembleConfig e =
        ensemble_of(cfg_, 13, std::max<std::uint64_t>(2, cfg_.n_samples / 8));
    e.grid.dx = cfg_.dx / 2.0;
    green_refined_ = estimate_normalized_green_m2(cfg_.t, e);
  }
  return *green_refined_;
}

KappaEstimate SharedEnsembles::kappa_at(double time) {
  for (const auto& [cached_t, est] : kappa_cache_)
    if (std::abs(cached_t - time) < 1e-12) return est;
  const EnsembleConfig e = ensemble_of(cfg_, 0, cfg_.n_samples);
  kappa_cache_.emplace_back(
      time, kappa_from_column(flat(), column(time, 0.0), time, e));
  return kappa_cache_.back().second;
}

// ---------------------------------------------------------------------------
// exact suite: closed-form identities, quadrature cross-checks, series

std::vector<CheckRow> exact_checks(const RunConfig& cfg) {
  (void)cfg;
  const auto start = Clock::now();
  std::vector<CheckRow> rows;
  std::mt19937_64 rng(0x5eed0001ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  {
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const double s = 0.01 + 1.99 * uni(rng);
      const double a = 0.05 + 1.95 * uni(rng);
      const double t = s + a;
      const double x = -4.0 + 8.0 * uni(rng);
      const double y = -4.0 + 8.0 * uni(rng);
      const double lhs = cov_kernel(t, s, x, y);
      const double rhs =
          heat_kernel(2.0 * a, x) * heat_kernel(0.5 * a, y - 0.5 * x);
      worst = std::max(worst, rel_diff(lhs, rhs));
    }
    rows.push_back(bound_above(
        "kernel-factorization",
        "the two-point kernel p_a(x-y) p_a(y) equals p_{2a}(x) p_{a/2}(y-x/2)",
        worst, 1e-10, "200 random (t,s,x,y) tuples, worst relative gap"));
  }

  const QuadOptions rel_only{0.0, 1e-12, 4000};

  {
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
      const double s = 0.05 + 1.45 * uni(rng);
      const double a = 0.05 + 1.45 * uni(rng);
      const double t = s + a;
      const double x = -3.0 + 6.0 * uni(rng);
      const QuadResult q = integrate_windowed(
          [s, t, x](double y) {
            return heat_kernel(s, y) * heat_kernel(t - s, x - y);
          },
          (s / t) * x, std::sqrt(s * a / t), rel_only);
      worst = std::max(worst, rel_diff(q.value, heat_kernel(t, x)));
    }
    rows.push_back(bound_above(
        "chapman-kolmogorov",
        "int p_s(y) p_{t-s}(x-y) dy reproduces p_t(x)", worst, 1e-10,
        "30 random (t,s,x) tuples against adaptive quadrature"));
  }

  {
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
      const double t = 0.1 + 1.9 * uni(rng);
      const double u = (0.02 + 0.96 * uni(rng)) * t;
      const double x = -3.0 + 6.0 * uni(rng);
      const QuadResult q = integrate_windowed(
          [u, t, x](double z) { return bridge_kernel(u, t, x, z); },
          (u / t) * x, std::sqrt(u * (t - u) / t), rel_only);
      worst = std::max(worst, std::abs(q.value - 1.0));
    }
    rows.push_back(bound_above(
        "bridge-normalization",
        "the pinned-path density integrates to one at every interior time",
        worst, 1e-10, "30 random (u,t,x) tuples against adaptive quadrature"));
  }

  {
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0 + 1e-9; x += 0.5) {
      const QuadResult q = integrate(
          [](double u) { return heat_kernel(1.0, u); }, x, x + 16.0, rel_only);
      worst = std::max(worst, rel_diff(q.value, normal_cdf(-x)));
    }
    rows.push_back(bound_above(
        "normal-cdf-quadrature",
        "Phi(-x) agrees with the integrated unit Gaussian tail on [-6,6]",
        worst, 1e-10, "both erfc branches crossed against quadrature"));
  }

  {
    double worst = 0.0;
    for (double x = -8.0; x <= 8.0 + 1e-9; x += 0.125)
      worst = std::max(worst,
                       std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0));
    rows.push_back(bound_above("normal-cdf-reflection",
                               "Phi(x) + Phi(-x) = 1 across both branches",
                               worst, 1e-12, "grid x in [-8,8], step 1/8"));
  }

  rows.push_back(bound_above(
      "exact-runtime", "the deterministic identity block finishes quickly",
      seconds_since(start), 5.0, "wall seconds for the identity checks"));

  {
    double worst_ml = 0.0, worst_pc = 0.0, worst_pm = 0.0;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (double beta : {0.5, 1.0, 1.5}) {
      for (double tau : {0.05, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
        const double z = beta * beta * std::sqrt(tau) / 2.0;
        const SeriesValue ml = mittag_leffler_series(0.5, 0.5, z);
        const double closed = m2_closed(beta, tau);
        const double picard = m2_series(beta, tau, 50);
        worst_ml = std::max(worst_ml, rel_diff(sqrt_pi * ml.value, closed));
        worst_pc = std::max(worst_pc, rel_diff(picard, closed));
        worst_pm = std::max(worst_pm, rel_diff(picard, sqrt_pi * ml.value));
      }
    }
    const std::string grid_note =
        "beta in {0.5,1,1.5}, tau in (0,4], 30 points";
    rows.push_back(bound_above(
        "ml-vs-closed",
        "sqrt(pi) E_{1/2,1/2}(b^2 sqrt(tau)/2) matches the closed second "
        "moment",
        worst_ml, 1e-9, grid_note));
    rows.push_back(bound_above(
        "picard-vs-closed",
        "the 50-term iteration series matches the closed second moment",
        worst_pc, 1e-9, grid_note));
    rows.push_back(bound_above(
        "picard-vs-ml",
        "the 50-term iteration series matches the Mittag-Leffler route",
        worst_pm, 1e-9, grid_note));
  }

  {
    const double xs[] = {4.0, 6.0, 8.0, 10.0};
    double ratio[4];
    for (int i = 0; i < 4; ++i) {
      const double x = xs[i];
      const ProxyValue q = proxy_integral(0.5, x, ProxyMethod::quadrature);
      ratio[i] = q.value / (std::exp(-x * x / 4.0) / (x * x));
    }
    double worst_step = 0.0;
    for (int i = 0; i + 1 < 4; ++i)
      worst_step = std::max(worst_step, ratio[i + 1] / ratio[i]);
    std::ostringstream det;
    det << "ratios";
    for (double r : ratio) det << " " << fmt(r);
    rows.push_back(bound_above(
        "tail-monotone",
        "the window-restricted overlap mass, against the x^{-2} Gaussian "
        "scale at the full horizon, decreases along x = 4,6,8,10",
        worst_step, 1.0 - 1e-12, det.str()));
    rows.push_back(bound_above(
        "tail-collapse",
        "the same normalized tail drops by three orders over the ladder",
        ratio[3] / ratio[0], 1e-3, det.str()));
  }

  return rows;
}

// ---------------------------------------------------------------------------
// volterra suite

std::vector<CheckRow> volterra_checks(
    const RunConfig& cfg,
    std::vector<std::pair<std::string, std::string>>* tables) {
  const auto start = Clock::now();
  std::vector<CheckRow> rows;
  const double beta = cfg.beta;
  const double tau = cfg.t;
  const double closed_bridge = m2_closed(beta, tau);
  const double closed_flat = pam_m2_closed(beta, tau);

  const int ladder[] = {512, 1024, 2048, 4096};
  double err_bridge[4], err_flat[4];
  MomentCurve bridge_fine, flat_fine;
  for (int i = 0; i < 4; ++i) {
    const MomentCurve b = solve_volterra_bridge(beta, tau, ladder[i]);
    const MomentCurve f = solve_volterra_flat(beta, tau, ladder[i]);
    err_bridge[i] = rel_diff(b.value.back(), closed_bridge);
    err_flat[i] = rel_diff(f.value.back(), closed_flat);
    if (i == 3) {
      bridge_fine = b;
      flat_fine = f;
    }
  }

  const auto min_order = [](const double* err) {
    double worst = 1e9;
    for (int i = 0; i + 1 < 4; ++i)
      worst = std::min(worst, std::log2(err[i] / err[i + 1]));
    return worst;
  };

  std::ostringstream det_b, det_f;
  det_b << "endpoint rel errors";
  det_f << "endpoint rel errors";
  for (int i = 0; i < 4; ++i) {
    det_b << " " << fmt(err_bridge[i]);
    det_f << " " << fmt(err_flat[i]);
  }

  rows.push_back(bound_above(
      "volterra-bridge-endpoint",
      "product integration of the pinned-path moment equation hits the "
      "closed form at the endpoint",
      err_bridge[3], 1e-4, det_b.str() + " at n=512..4096"));
  rows.push_back(bound_above(
      "volterra-flat-endpoint",
      "product integration of the flat-data moment equation hits the closed "
      "form at the endpoint",
      err_flat[3], 1e-4, det_f.str() + " at n=512..4096"));
  rows.push_back(bound_below("volterra-bridge-order",
                             "grid doubling shrinks the endpoint error at "
                             "first order or better (pinned-path equation)",
                             min_order(err_bridge), 1.0, det_b.str()));
  rows.push_back(bound_below("volterra-flat-order",
                             "grid doubling shrinks the endpoint error at "
                             "first order or better (flat-data equation)",
                             min_order(err_flat), 1.0, det_f.str()));

  {
    double min_gap = 1e300;
    for (std::size_t i = 1; i < bridge_fine.tau.size(); ++i)
      min_gap = std::min(min_gap, bridge_fine.value[i] - flat_fine.value[i]);
    rows.push_back(bound_below(
        "volterra-domination",
        "the pinned-path second moment strictly dominates the flat-data one "
        "for tau > 0",
        min_gap, 1e-12,
        "min gap over the shared n=4096 grid, excluding tau=0"));
  }

  {
    const SmallTimeFirstOrder s = small_time_expansions(1.0, 1.0);
    const double gap = (s.bridge - 1.0) - (s.flat - 1.0);
    const double expected =
        std::sqrt(std::numbers::pi) / 2.0 - 1.0 / std::sqrt(std::numbers::pi);
    rows.push_back(two_sided(
        "smalltime-coefficients",
        "the first-order small-time coefficients are sqrt(pi)/2 vs "
        "1/sqrt(pi), and the former is larger",
        gap, expected, 1e-15, "evaluated at beta=1, tau=1"));
    rows.back().passed = rows.back().passed && gap > 0.0;
  }

  rows.push_back(bound_above("volterra-runtime",
                             "the integral-equation block finishes quickly",
                             seconds_since(start), 30.0,
                             "wall seconds for the n=512..4096 ladder"));

  if (tables) {
    MomentCurve closed_b, closed_f;
    closed_b.tau = bridge_fine.tau;
    closed_f.tau = flat_fine.tau;
    closed_b.source = "closed";
    closed_f.source = "closed";
    closed_b.beta = beta;
    closed_f.beta = beta;
    for (double u : bridge_fine.tau)
      closed_b.value.push_back(m2_closed(beta, u));
    for (double u : flat_fine.tau)
      closed_f.value.push_back(pam_m2_closed(beta, u));
    bridge_fine.source = "volterra-bridge";
    flat_fine.source = "volterra-flat";
    closed_b.source = "closed-bridge";
    closed_f.source = "closed-flat";
    tables->emplace_back(
        "volterra_curves.csv",
        moment_curve_csv({bridge_fine, flat_fine, closed_b, closed_f}));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// pam suite

std::vector<CheckRow> pam_checks(SharedEnsembles& shared,
                                 std::vector<Estimate>* estimates) {
  const RunConfig& cfg = shared.config();
  std::vector<CheckRow> rows;
  const double closed = pam_m2_closed(cfg.beta, cfg.t);
  const EnsembleConfig e = ensemble_of(cfg, 0, cfg.n_samples);
  const Estimate coarse = moment_from_column(
      shared.flat(), shared.column(cfg.t, 0.0), cfg.t, 0.0, 2, e);
  const Estimate& refined = shared.pam_refined();

  const double budget = 0.03 * closed;
  rows.push_back(two_sided(
      "pam-m2-sim",
      "the simulated flat-data second moment matches the closed form within "
      "three standard errors plus a 3% discretization budget",
      coarse.estimate, closed, 3.0 * coarse.std_error + budget,
      "n=" + std::to_string(coarse.n_samples) + " dx=" + fmt(cfg.dx) +
          " dt=" + fmt(cfg.dt) + " seed=" + std::to_string(coarse.seed),
      coarse.std_error));

  const double gap_c = std::abs(coarse.estimate - closed);
  const double gap_r = std::abs(refined.estimate - closed);
  const double se_comb = std::hypot(coarse.std_error, refined.std_error);
  rows.push_back(bound_below(
      "pam-m2-refinement",
      "halving dx does not move the second moment away from the closed form "
      "beyond sampling resolution",
      gap_c - gap_r, -2.0 * se_comb,
      "coarse gap " + fmt(gap_c) + ", refined gap " + fmt(gap_r) +
          ", refined n=" + std::to_string(refined.n_samples),
      se_comb));

  if (estimates) {
    estimates->push_back(coarse);
    estimates->push_back(refined);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// green-m2 suite

std::vector<CheckRow> green_m2_checks(SharedEnsembles& shared,
                                      std::vector<Estimate>* estimates) {
  const RunConfig& cfg = shared.config();
  std::vector<CheckRow> rows;
  const double closed = m2_closed(cfg.beta, cfg.t);
  const GreenM2Estimate& g = shared.green();
  const GreenM2Estimate& gr = shared.green_refined();

  rows.push_back(two_sided(
      "green-m2-sim",
      "the simulated second moment of the normalized point source matches "
      "the closed form within three standard errors plus a 3% budget",
      g.m2.estimate, closed, 3.0 * g.m2.std_error + 0.03 * closed,
      "n=" + std::to_string(g.m2.n_samples) + " dx=" + fmt(cfg.dx) +
          " seed=" + std::to_string(g.m2.seed),
      g.m2.std_error));

  rows.push_back(two_sided(
      "green-mean-one",
      "the normalized point source has unit mean", g.mean_one.estimate, 1.0,
      3.0 * g.mean_one.std_error,
      "n=" + std::to_string(g.mean_one.n_samples), g.mean_one.std_error));

  const double gap_c = std::abs(g.m2.estimate - closed);
  const double gap_r = std::abs(gr.m2.estimate - closed);
  const double se_comb = std::hypot(g.m2.std_error, gr.m2.std_error);
  rows.push_back(bound_below(
      "green-m2-refinement",
      "halving dx does not move the point-source second moment away from "
      "the closed form beyond sampling resolution",
      gap_c - gap_r, -2.0 * se_comb,
      "coarse gap " + fmt(gap_c) + ", refined gap " + fmt(gap_r) +
          ", refined n=" + std::to_string(gr.m2.n_samples),
      se_comb));

  if (estimates) {
    estimates->push_back(g.m2);
    estimates->push_back(g.mean_one);
    estimates->push_back(gr.m2);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// kappa suite

std::vector<CheckRow> kappa_checks(SharedEnsembles& shared,
                                   std::vector<Estimate>* estimates) {
  const RunConfig& cfg = shared.config();
  std::vector<CheckRow> rows;
  const KappaEstimate k = shared.kappa_at(cfg.t);
  const double m2c = pam_m2_closed(cfg.beta, cfg.t);

  rows.push_back(bound_below(
      "kappa-above-one",
      "the mean inverse field value exceeds one with z at least 3",
      k.z_vs_one, 3.0,
      "kappa_star=" + fmt(k.kappa_star.estimate) +
          " se=" + fmt(k.kappa_star.std_error) +
          " n=" + std::to_string(k.kappa_star.n_samples),
      k.kappa_star.std_error));

  rows.push_back(two_sided(
      "kappa-identity",
      "E[(Z-1)^2] equals the closed second moment minus one, within three "
      "standard errors plus a 3% discretization budget",
      k.mean_sq_dev.estimate, m2c - 1.0,
      3.0 * k.mean_sq_dev.std_error + 0.03 * (m2c - 1.0),
      "same-path estimator at t=" + fmt(cfg.t), k.mean_sq_dev.std_error));

  {
    const std::vector<double>& ladder = shared.smalltime_ladder();
    std::vector<double> rel, rel_se;
    std::ostringstream det;
    for (double u : ladder) {
      const KappaEstimate ku = shared.kappa_at(u);
      const double msd = std::max(ku.mean_sq_dev.estimate, 1e-300);
      rel.push_back(std::abs(ku.smalltime_gap.estimate) / msd);
      rel_se.push_back(ku.smalltime_gap.std_error / msd);
      det << " t=" << fmt(u) << " gap/msd=" << fmt(rel.back()) << " (se "
          << fmt(rel_se.back()) << ")";
      if (estimates) {
        estimates->push_back(ku.smalltime_gap);
        estimates->push_back(ku.mean_sq_dev);
      }
    }
    // tightening toward small t, judged against the sampling noise of the
    // relative gaps; the relation must also hold at leading order
    double worst_z = 0.0;
    for (std::size_t i = 0; i + 1 < rel.size(); ++i) {
      const double se = std::max(std::hypot(rel_se[i], rel_se[i + 1]), 1e-300);
      worst_z = std::max(worst_z, (rel[i] - rel[i + 1]) / se);
    }
    const double worst_rel = *std::max_element(rel.begin(), rel.end());
    CheckRow r;
    r.id = "kappa-smalltime";
    r.claim = "the gap between the inverse-mean excess and the mean square "
              "deviation shrinks relative to the latter as t decreases, "
              "within sampling noise";
    r.observed = worst_z;
    r.expected = 3.0;
    r.tolerance = 0.0;
    r.passed = worst_z <= 3.0 && worst_rel <= 0.25;
    r.details = "worst tightening z=" + fmt(worst_z) +
                ", largest relative gap " + fmt(worst_rel) + " (bound 0.25);" +
                det.str();
    rows.push_back(r);
  }

  {
    const EnsembleConfig e = ensemble_of(cfg, 0, cfg.n_samples);
    const Estimate mean = moment_from_column(
        shared.flat(), shared.column(cfg.t, 0.0), cfg.t, 0.0, 1, e);
    rows.push_back(two_sided("flat-mean-one",
                             "the flat-data field keeps unit mean",
                             mean.estimate, 1.0, 3.0 * mean.std_error,
                             "n=" + std::to_string(mean.n_samples),
                             mean.std_error));
    if (estimates) estimates->push_back(mean);
  }

  {
    CheckRow r;
    r.id = "kappa-tail-diagnostic";
    r.claim = "largest observed inverse field value, recorded as a tail "
              "diagnostic (no bound asserted)";
    r.observed = k.max_inverse;
    r.expected = k.max_inverse;
    r.tolerance = 0.0;
    r.passed = true;
    r.details = "n=" + std::to_string(k.kappa_star.n_samples);
    rows.push_back(r);
  }

  if (estimates) {
    estimates->push_back(k.kappa_star);
    estimates->push_back(k.mean_sq_dev);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// covariance suite

namespace {

struct CovProfile {
  // symmetrized over +-x; x = 0 enters as-is
  std::vector<double> x;       // ascending, x >= 0
  std::vector<double> cov;
  std::vector<double> se;
  std::vector<bool> reliable;  // |cov| >= 2 se
};

CovProfile symmetrize(const std::vector<CovariancePoint>& pts) {
  CovProfile prof;
  for (const CovariancePoint& p : pts) {
    if (p.x < 0.0) continue;
    prof.x.push_back(p.x);
    if (p.x == 0.0) {
      prof.cov.push_back(p.cov);
      prof.se.push_back(p.std_error);
    } else {
      const auto mirror =
          std::find_if(pts.begin(), pts.end(), [&](const CovariancePoint& q) {
            return std::abs(q.x + p.x) < 1e-12;
          });
      if (mirror == pts.end()) {
        prof.cov.push_back(p.cov);
        prof.se.push_back(p.std_error);
      } else {
        prof.cov.push_back(0.5 * (p.cov + mirror->cov));
        prof.se.push_back(0.5 * std::hypot(p.std_error, mirror->std_error));
      }
    }
    prof.reliable.push_back(std::abs(prof.cov.back()) >=
                            2.0 * prof.se.back());
  }
  return prof;
}

}  // namespace

std::vector<CheckRow> covariance_checks(
    SharedEnsembles& shared, std::vector<Estimate>* estimates,
    std::vector<std::pair<std::string, std::string>>* tables) {
  (void)estimates;
  const RunConfig& cfg = shared.config();
  std::vector<CheckRow> rows;
  const std::vector<double>& offs = shared.offsets();
  std::vector<std::size_t> cols(offs.size());
  for (std::size_t i = 0; i < cols.size(); ++i)
    cols[i] = shared.column(cfg.t, offs[i]);
  const std::vector<CovariancePoint> pts = cov_h_from_columns(
      shared.flat(), shared.column(cfg.t, 0.0), offs, cols);
  const double kappa_hat = shared.kappa_at(cfg.t).kappa;

  const CovProfile prof = symmetrize(pts);
  const std::size_t n_rel =
      static_cast<std::size_t>(std::count(prof.reliable.begin(),
                                          prof.reliable.end(), true));

  {
    double min_cov = 1e300;
    for (std::size_t i = 0; i < prof.x.size(); ++i)
      if (prof.reliable[i]) min_cov = std::min(min_cov, prof.cov[i]);
    rows.push_back(bound_below(
        "cov-positive",
        "the height covariance is positive at every reliable offset",
        min_cov, 0.0,
        std::to_string(n_rel) + " reliable offsets out of " +
            std::to_string(prof.x.size())));
  }

  {
    // paired test: the two estimates ride the same paths, so the z uses the
    // standard error of the per-path difference, not the marginal errors
    double worst_z = 0.0, worst_x = 0.0;
    std::size_t n_pairs = 0;
    const std::size_t col0 = shared.column(cfg.t, 0.0);
    for (std::size_t i = 0; i < offs.size(); ++i) {
      if (offs[i] <= 0.0) continue;
      for (std::size_t j = 0; j < offs.size(); ++j) {
        if (std::abs(offs[j] + offs[i]) >= 1e-12) continue;
        const CovWithError d =
            cov_of_log_diff(shared.flat(), cols[i], cols[j], col0);
        ++n_pairs;
        if (d.std_error > 0.0 && std::abs(d.cov) / d.std_error > worst_z) {
          worst_z = std::abs(d.cov) / d.std_error;
          worst_x = offs[i];
        }
      }
    }
    rows.push_back(bound_above(
        "cov-symmetric",
        "the covariance profile is even in x, worst mirror pair within a "
        "3.6 sigma family bound",
        worst_z, 3.6,
        std::to_string(n_pairs) + " mirror pairs, worst at |x|=" +
            fmt(worst_x)));
  }

  {
    double worst = 1e300;
    std::size_t checked = 0;
    for (std::size_t i = 0, last = SIZE_MAX; i < prof.x.size(); ++i) {
      if (!prof.reliable[i]) continue;
      if (last != SIZE_MAX) {
        const double slack = 2.0 * std::hypot(prof.se[last], prof.se[i]);
        worst = std::min(worst, prof.cov[last] - prof.cov[i] + slack);
        ++checked;
      }
      last = i;
    }
    rows.push_back(bound_below(
        "cov-monotone",
        "the covariance decreases in |x| beyond error bars over reliable "
        "offsets",
        checked ? worst : 0.0, 0.0,
        std::to_string(checked) + " consecutive reliable pairs"));
  }

  // ratio diagnostics against the overlap integral
  std::vector<double> ratio(prof.x.size(), 0.0), relerr(prof.x.size(), 0.0);
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    const double I = proxy_integral(cfg.t, prof.x[i]).value;
    ratio[i] = prof.cov[i] / I;
    relerr[i] =
        prof.se[i] / std::max(std::abs(prof.cov[i]), 1e-300);
  }
  std::size_t i_max = SIZE_MAX;
  for (std::size_t i = 0; i < prof.x.size(); ++i)
    if (prof.reliable[i]) i_max = i;  // ascending: last reliable is farthest

  if (i_max == SIZE_MAX) {
    rows.push_back(bound_below("cov-envelope",
                               "no reliable offsets were available", -1.0, 0.0,
                               "increase n-samples"));
    rows.push_back(bound_below("cov-ratio-floor",
                               "no reliable offsets were available", -1.0, 0.0,
                               "increase n-samples"));
    rows.push_back(bound_below("cov-ratio-band",
                               "no reliable offsets were available", -1.0, 0.0,
                               "increase n-samples"));
  } else {
    {
      const double c_t = ratio[i_max];
      double worst = 0.0;
      for (std::size_t i = 0; i < prof.x.size(); ++i) {
        if (!prof.reliable[i]) continue;
        const double allowed =
            c_t * (1.0 + 3.0 * relerr[i] + 3.0 * relerr[i_max]);
        worst = std::max(worst, ratio[i] / allowed);
      }
      rows.push_back(bound_above(
          "cov-envelope",
          "one constant, the ratio at the farthest reliable offset, "
          "dominates cov/I at every reliable offset up to sampling slack",
          worst, 1.0, "C_t=" + fmt(c_t) + " at x=" + fmt(prof.x[i_max])));
    }
    {
      // the two farthest reliable offsets
      std::size_t i2 = SIZE_MAX;
      for (std::size_t i = 0; i < i_max; ++i)
        if (prof.reliable[i]) i2 = i;
      double worst = 1e300;
      std::ostringstream det;
      for (std::size_t i : {i2, i_max}) {
        if (i == SIZE_MAX) continue;
        worst = std::min(worst, ratio[i] - (1.0 - 3.0 * relerr[i]));
        det << " x=" << fmt(prof.x[i]) << " ratio=" << fmt(ratio[i])
            << " relerr=" << fmt(relerr[i]);
      }
      rows.push_back(bound_below(
          "cov-ratio-floor",
          "cov/I at the farthest reliable offsets exceeds one minus three "
          "relative errors",
          worst, 0.0, det.str()));
    }
    {
      double worst_low = 1e300, worst_high = 0.0;
      for (std::size_t i = 0; i < prof.x.size(); ++i) {
        if (!prof.reliable[i]) continue;
        worst_low = std::min(worst_low, ratio[i] - (1.0 - 3.0 * relerr[i]));
        worst_high = std::max(
            worst_high, ratio[i] / (1.5 * kappa_hat * (1.0 + 3.0 * relerr[i])));
      }
      CheckRow r;
      r.id = "cov-ratio-band";
      r.claim =
          "cov/I sits in the band [1 - 3 relerr, 1.5 kappa (1 + 3 relerr)] "
          "at every reliable offset";
      r.observed = worst_low;
      r.expected = 0.0;
      r.tolerance = 0.0;
      r.passed = worst_low >= 0.0 && worst_high <= 1.0;
      r.details = "upper-band utilization " + fmt(worst_high) +
                  ", kappa=" + fmt(kappa_hat);
      rows.push_back(r);
    }
  }

  {
    const EnsembleConfig e = ensemble_of(cfg, 0, cfg.n_samples);
    const KappaEstimate fresh = kappa_from_column(
        shared.flat(), shared.column(cfg.t, 0.0), cfg.t, e);
    rows.push_back(two_sided(
        "cov-kappa-reference",
        "the table's kappa reference reproduces the inverse-moment estimate "
        "from the same seed family",
        fresh.kappa, kappa_hat, 0.0, "recomputed from the shared ensemble"));
  }

  if (tables) tables->emplace_back("covariance_table.csv",
                                   covariance_table_csv(shared));
  return rows;
}

std::string covariance_table_csv(SharedEnsembles& shared) {
  const RunConfig& cfg = shared.config();
  const std::vector<double>& offs = shared.offsets();
  std::vector<std::size_t> cols(offs.size());
  for (std::size_t i = 0; i < cols.size(); ++i)
    cols[i] = shared.column(cfg.t, offs[i]);
  const std::vector<CovariancePoint> pts = cov_h_from_columns(
      shared.flat(), shared.column(cfg.t, 0.0), offs, cols);
  const double kappa_hat = shared.kappa_at(cfg.t).kappa;
  std::ostringstream out;
  out << "x,cov,std_error,I_flat,ratio,kappa_reference\n";
  char buf[256];
  for (const CovariancePoint& p : pts) {
    const double I = proxy_integral(cfg.t, p.x).value;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  p.x, p.cov, p.std_error, I, p.cov / I, kappa_hat);
    out << buf;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// boundary-layer suite

std::vector<CheckRow> boundary_layer_checks(SharedEnsembles& shared,
                                            std::vector<Estimate>* estimates) {
  const RunConfig& cfg = shared.config();
  std::vector<CheckRow> rows;
  const double t = cfg.t;
  const double s = 0.01;
  if (t <= s + cfg.dt)
    throw std::invalid_argument("boundary-layer: t too small for s=0.01");

  const double kappa_star = shared.kappa_at(t - s).kappa_star.estimate;
  const std::vector<double> seps = {2.0, 4.0, 6.0};

  const std::size_t n_batches = 10;
  const std::uint64_t nb =
      std::max<std::uint64_t>(50, cfg.n_samples / (4 * n_batches));
  std::vector<std::array<double, 3>> batch_means;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const EnsembleConfig e = ensemble_of(cfg, 7000 + b, nb);
    const std::vector<Estimate> prof = b_tilde_profile(t, s, seps, e);
    batch_means.push_back({prof[0].estimate, prof[1].estimate,
                           prof[2].estimate});
  }

  // pooled estimates per separation
  std::array<double, 3> pooled{}, pooled_se{};
  for (int j = 0; j < 3; ++j) {
    double sum = 0.0;
    for (const auto& bm : batch_means) sum += bm[j];
    pooled[j] = sum / n_batches;
    double ss = 0.0;
    for (const auto& bm : batch_means)
      ss += (bm[j] - pooled[j]) * (bm[j] - pooled[j]);
    pooled_se[j] = std::sqrt(ss / (n_batches - 1.0) / n_batches);
  }

  {
    double mean_d = 0.0;
    std::vector<double> ds;
    for (const auto& bm : batch_means) {
      const double d =
          std::abs(bm[0] - kappa_star) - std::abs(bm[2] - kappa_star);
      ds.push_back(d);
      mean_d += d;
    }
    mean_d /= n_batches;
    double ss = 0.0;
    for (double d : ds) ss += (d - mean_d) * (d - mean_d);
    const double se_d = std::sqrt(ss / (n_batches - 1.0) / n_batches);
    const double z = se_d > 0.0 ? mean_d / se_d : 0.0;
    std::ostringstream det;
    det << "pooled ratios";
    for (int j = 0; j < 3; ++j)
      det << " sep=" << fmt(seps[j]) << ": " << fmt(pooled[j]) << "+-"
          << fmt(pooled_se[j]);
    det << "; reference " << fmt(kappa_star) << "; " << n_batches
        << " batches of " << nb;
    rows.push_back(bound_below(
        "bl-trend",
        "the future-only profile approaches the inverse-moment constant: "
        "the gap at separation 6 is smaller than at separation 2 (z >= 3 "
        "over seed batches)",
        z, 3.0, det.str(), se_d));
  }

  {
    const std::uint64_t nt = std::max<std::uint64_t>(50, cfg.n_samples / 10);
    const EnsembleConfig e1 = ensemble_of(cfg, 8101, nt);
    const EnsembleConfig e2 = ensemble_of(cfg, 8102, nt);
    const Estimate a = estimate_b_tilde(t, s, 1.0, -1.0, e1);
    const Estimate b = estimate_b_tilde(t, s, 2.0, 0.0, e2);
    const double se = std::hypot(a.std_error, b.std_error);
    rows.push_back(bound_above(
        "bl-translation-space",
        "the future-only profile depends on x - y only, within error bars",
        se > 0.0 ? std::abs(a.estimate - b.estimate) / se : 0.0, 3.0,
        "window " + fmt(t - s) + ", separation 2, two spatial placements",
        se));
    if (estimates) {
      estimates->push_back(a);
      estimates->push_back(b);
    }
  }

  {
    const std::uint64_t nt = std::max<std::uint64_t>(50, cfg.n_samples / 10);
    const double w = (t - s) / 2.0;
    const EnsembleConfig e1 = ensemble_of(cfg, 8103, nt);
    const EnsembleConfig e2 = ensemble_of(cfg, 8104, nt);
    const Estimate a = estimate_b_tilde(s + w, s, 1.0, -1.0, e1);
    const Estimate b = estimate_b_tilde(t, t - w, 1.0, -1.0, e2);
    const double se = std::hypot(a.std_error, b.std_error);
    rows.push_back(bound_above(
        "bl-translation-time",
        "the future-only profile depends on t - s only, within error bars",
        se > 0.0 ? std::abs(a.estimate - b.estimate) / se : 0.0, 3.0,
        "window " + fmt(w) + ", separation 2, two temporal placements", se));
    if (estimates) {
      estimates->push_back(a);
      estimates->push_back(b);
    }
  }

  if (estimates) {
    for (int j = 0; j < 3; ++j) {
      Estimate p;
      p.label = "boundary_layer_ratio_pooled";
      p.params = {{"t", t}, {"s", s}, {"x", 0.5 * seps[j]},
                  {"y", -0.5 * seps[j]}, {"beta", cfg.beta}};
      p.estimate = pooled[j];
      p.std_error = pooled_se[j];
      p.n_samples = nb * n_batches;
      p.seed = cfg.seed + 7000;
      p.grid = cfg.grid();
      estimates->push_back(p);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// shear suite

std::vector<CheckRow> shear_checks(const RunConfig& cfg) {
  (void)cfg;
  std::vector<CheckRow> rows;
  const Profile box = Profile::make_box(0.0, 1.0, 0.0, 1.0);

  rows.push_back(two_sided(
      "shear-box-identity", "the unsheared unit box pairs to its own area",
      shear_inner_product(box, box, 0.0, 0.0), 1.0, 1e-15, "r=0, nu=0"));

  {
    const double nus[] = {1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 32.0};
    double worst = 0.0;
    for (double nu : nus)
      worst = std::max(worst, std::abs(shear_inner_product(box, box, 0.0, nu) -
                                       0.5 / nu));
    rows.push_back(bound_above(
        "shear-box-exact",
        "sheared unit boxes pair to exactly 1/(2 nu) for nu >= 1", worst,
        1e-12, "nu in {1,1.5,2,4,8,16,32}, worst absolute gap"));
  }

  {
    const double nus[] = {1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    double prev = shear_inner_product(box, box, 0.0, nus[0]);
    double worst = -1e300;
    for (std::size_t i = 1; i < std::size(nus); ++i) {
      const double v = shear_inner_product(box, box, 0.0, nus[i]);
      worst = std::max(worst, v - prev);
      prev = v;
    }
    rows.push_back(bound_above(
        "shear-box-monotone",
        "the box pairing decreases strictly toward zero as nu grows", worst,
        -1e-15, "consecutive differences over nu in {1,...,64}"));
  }

  {
    const Profile bump = Profile::make_gaussians(
        {GaussianTerm{1.0, 1.0, 0.0, 0.05, 1.0}});
    const double nus[] = {1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
    std::vector<double> vals;
    for (double nu : nus)
      vals.push_back(shear_inner_product(bump, bump, 0.0, nu));
    double worst = -1e300;
    for (std::size_t i = 1; i < vals.size(); ++i)
      worst = std::max(worst, vals[i] - vals[i - 1]);
    std::ostringstream det;
    det << "values";
    for (double v : vals) det << " " << fmt(v);
    rows.push_back(bound_above(
        "shear-gauss-decay",
        "the Gaussian-bump pairing falls below 1e-8 by nu = 50",
        vals.back(), 1e-8, det.str()));
    rows.push_back(bound_above(
        "shear-gauss-monotone",
        "the Gaussian-bump pairing decreases along the nu ladder", worst,
        0.0, det.str()));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// composition

SuiteReport run_checks(const RunConfig& cfg, SharedEnsembles& shared) {
  const auto start = Clock::now();
  SuiteReport rep;
  rep.suite = cfg.suite;
  rep.config = cfg;

  const auto append = [&rep](std::vector<CheckRow> rows) {
    for (CheckRow& r : rows) rep.rows.push_back(std::move(r));
  };

  const std::string& s = cfg.suite;
  if (s == "exact" || s == "all") append(exact_checks(cfg));
  if (s == "volterra" || s == "all")
    append(volterra_checks(cfg, &rep.tables));
  if (s == "pam" || s == "all") append(pam_checks(shared, &rep.estimates));
  if (s == "green-m2" || s == "all")
    append(green_m2_checks(shared, &rep.estimates));
  if (s == "kappa" || s == "all") append(kappa_checks(shared, &rep.estimates));
  if (s == "covariance" || s == "all")
    append(covariance_checks(shared, &rep.estimates, &rep.tables));
  if (s == "boundary-layer" || s == "all")
    append(boundary_layer_checks(shared, &rep.estimates));
  if (s == "shear" || s == "all") append(shear_checks(cfg));

  if (rep.rows.empty())
    throw std::invalid_argument("run_checks: unknown suite '" + s + "'");
  rep.wall_seconds = seconds_since(start);
  return rep;
}

SuiteReport run_suite(const RunConfig& cfg) {
  cfg.validate();
  SharedEnsembles shared(cfg);
  SuiteReport rep = run_checks(cfg, shared);
  write_suite_artifacts(rep);
  return rep;
}

const std::vector<CriterionSpec>& acceptance_criteria() {
  static const std::vector<CriterionSpec> list = {
      {1,
       "closed-form kernel identities hold to 1e-10 and finish in under "
       "five seconds",
       {"kernel-factorization", "chapman-kolmogorov", "bridge-normalization",
        "normal-cdf-quadrature", "normal-cdf-reflection", "exact-runtime"}},
      {2,
       "the Mittag-Leffler, closed-form, and 50-term series routes to the "
       "second moment agree to 1e-9",
       {"ml-vs-closed", "picard-vs-closed", "picard-vs-ml"}},
      {3,
       "both integral-equation solvers hit their closed forms to 1e-4 at "
       "n=4096 with observed order >= 1, in under thirty seconds",
       {"volterra-bridge-endpoint", "volterra-flat-endpoint",
        "volterra-bridge-order", "volterra-flat-order", "volterra-runtime"}},
      {4,
       "the pinned-path moment dominates the flat-data moment, and "
       "sqrt(pi)/2 > 1/sqrt(pi) at first order",
       {"volterra-domination", "smalltime-coefficients"}},
      {5,
       "the simulated flat-data second moment matches the closed form "
       "within 3 SE + 3%, validated by a dx/2 refinement",
       {"pam-m2-sim", "pam-m2-refinement"}},
      {6,
       "the simulated point-source second moment matches the closed form "
       "under the same policy, and the mean-one check passes",
       {"green-m2-sim", "green-mean-one", "green-m2-refinement"}},
      {7,
       "the inverse moment exceeds one at z >= 3, the square-deviation "
       "identity holds, and the small-time relation tightens",
       {"kappa-above-one", "kappa-identity", "kappa-smalltime"}},
      {8,
       "the height covariance is positive, symmetric, decreasing, and "
       "envelope-bounded by the overlap integral with ratio >= 1 - 3 relerr "
       "at the far end",
       {"cov-positive", "cov-symmetric", "cov-monotone", "cov-envelope",
        "cov-ratio-floor", "cov-ratio-band", "cov-kappa-reference"}},
      {9,
       "the future-only profile trends toward the inverse-moment constant "
       "and is translation invariant",
       {"bl-trend", "bl-translation-space", "bl-translation-time"}},
      {10,
       "exact shear pairings: boxes give 1/(2 nu) to 1e-12 and decay "
       "monotonically; Gaussian bumps drop below 1e-8 by nu = 50",
       {"shear-box-identity", "shear-box-exact", "shear-box-monotone",
        "shear-gauss-decay", "shear-gauss-monotone"}},
      {11,
       "the window-restricted tail mass, normalized by the x^{-2} Gaussian "
       "scale, collapses along x = 4,6,8,10",
       {"tail-monotone", "tail-collapse"}},
  };
  return list;
}

}  // namespace shelab
