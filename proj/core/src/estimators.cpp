#include "shelab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shelab/ensemble.hpp"
#include "shelab/spde.hpp"

namespace shelab {
namespace {

MeanWithError mapped_stats(const SampleMatrix& m, std::size_t column,
                           const std::function<double(double)>& map) {
  const std::size_t n = m.rows();
  if (n < 2) throw std::invalid_argument("mapped_stats: need n >= 2");
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = map(m.data[i * m.width + column]) - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = map(m.data[i * m.width + column]) - mean;
    ss += d * d;
  }
  const double nn = static_cast<double>(n);
  return {mean, std::sqrt(ss / (nn - 1.0) / nn)};
}

Estimate make_estimate(std::string label,
                       std::vector<std::pair<std::string, double>> params,
                       MeanWithError stats, const EnsembleConfig& cfg) {
  Estimate e;
  e.label = std::move(label);
  e.params = std::move(params);
  e.estimate = stats.mean;
  e.std_error = stats.std_error;
  e.n_samples = cfg.n_samples;
  e.seed = cfg.seed;
  e.grid = cfg.grid;
  e.low_precision = stats.std_error > 0.1 * std::abs(stats.mean);
  return e;
}

CovWithError cov_of_logs(const SampleMatrix& m, std::size_t col_a,
                         std::size_t col_b) {
  const std::size_t n = m.rows();
  if (n < 2) throw std::invalid_argument("cov_of_logs: need n >= 2");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += std::log(m.data[i * m.width + col_a]);
    mb += std::log(m.data[i * m.width + col_b]);
  }
  ma /= n;
  mb /= n;
  double sum = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (std::log(m.data[i * m.width + col_a]) - ma) *
                     (std::log(m.data[i * m.width + col_b]) - mb);
    sum += w;
  }
  const double mean_w = sum / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (std::log(m.data[i * m.width + col_a]) - ma) *
                     (std::log(m.data[i * m.width + col_b]) - mb);
    ss += (w - mean_w) * (w - mean_w);
  }
  const double nn = static_cast<double>(n);
  return {mean_w * nn / (nn - 1.0), std::sqrt(ss / (nn - 1.0) / nn)};
}

}  // namespace

SampleMatrix flat_field_samples(const EnsembleConfig& cfg,
                                std::span<const double> times,
                                std::span<const double> xs) {
  cfg.grid.validate();
  if (times.empty() || xs.empty())
    throw std::invalid_argument("flat_field_samples: empty request");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw std::invalid_argument("flat_field_samples: times must ascend");
  std::vector<std::size_t> cells(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j)
    cells[j] = cfg.grid.index_of(xs[j]);
  SampleMatrix out;
  out.width = times.size() * xs.size();
  const GridSpec grid = cfg.grid;
  const double beta = cfg.beta;
  const std::uint64_t seed = cfg.seed;
  const std::vector<double> trec(times.begin(), times.end());
  out.data = run_samples(
      cfg.n_samples, out.width,
      [&grid, beta, seed, &trec, &cells](std::uint64_t sample,
                                         std::span<double> row) {
        Simulator sim(grid, beta, seed);
        FieldState f = sim.flat_state(0.0);
        for (std::size_t ti = 0; ti < trec.size(); ++ti) {
          sim.advance(f, sample, trec[ti]);
          for (std::size_t j = 0; j < cells.size(); ++j)
            row[ti * cells.size() + j] = f.values[cells[j]];
        }
      });
  return out;
}

Estimate moment_from_column(const SampleMatrix& m, std::size_t column, double t,
                            double x, int p, const EnsembleConfig& cfg) {
  if (p < 0) throw std::domain_error("moment_from_column: p must be >= 0");
  std::vector<std::pair<std::string, double>> params = {
      {"t", t}, {"x", x}, {"p", static_cast<double>(p)}, {"beta", cfg.beta}};
  if (p == 0)
    return make_estimate("field_moment", std::move(params),
                         MeanWithError{1.0, 0.0}, cfg);
  MeanWithError s = mapped_stats(
      m, column,
      [p](double v) { return std::pow(v, static_cast<double>(p)); });
  return make_estimate("field_moment", std::move(params), s, cfg);
}

Estimate estimate_moment(double t, double x, int p, const EnsembleConfig& cfg) {
  if (p < 0) throw std::domain_error("estimate_moment: p must be >= 0");
  if (p == 0)
    return make_estimate(
        "field_moment",
        {{"t", t}, {"x", x}, {"p", 0.0}, {"beta", cfg.beta}},
        MeanWithError{1.0, 0.0}, cfg);
  const double times[] = {t};
  const double xs[] = {x};
  SampleMatrix m = flat_field_samples(cfg, times, xs);
  return moment_from_column(m, 0, t, x, p, cfg);
}

KappaEstimate kappa_from_column(const SampleMatrix& m, std::size_t column,
                                double t, const EnsembleConfig& cfg) {
  KappaEstimate out;
  MeanWithError inv =
      mapped_stats(m, column, [](double v) { return 1.0 / v; });
  MeanWithError sq =
      mapped_stats(m, column, [](double v) { return (v - 1.0) * (v - 1.0); });
  MeanWithError gap = mapped_stats(m, column, [](double v) {
    const double d = v - 1.0;
    return -d * d * d / v;
  });
  out.kappa_star = make_estimate(
      "inverse_moment", {{"t", t}, {"beta", cfg.beta}}, inv, cfg);
  out.mean_sq_dev = make_estimate(
      "mean_square_deviation", {{"t", t}, {"beta", cfg.beta}}, sq, cfg);
  out.smalltime_gap = make_estimate(
      "smalltime_gap", {{"t", t}, {"beta", cfg.beta}}, gap, cfg);
  out.kappa = inv.mean * inv.mean;
  out.kappa_std_error = 2.0 * std::abs(inv.mean) * inv.std_error;
  out.z_vs_one =
      inv.std_error > 0.0 ? (inv.mean - 1.0) / inv.std_error : 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    worst = std::max(worst, 1.0 / m.data[i * m.width + column]);
  out.max_inverse = worst;
  return out;
}

KappaEstimate estimate_kappa(double t, const EnsembleConfig& cfg) {
  const double times[] = {t};
  const double xs[] = {0.0};
  SampleMatrix m = flat_field_samples(cfg, times, xs);
  return kappa_from_column(m, 0, t, cfg);
}

std::vector<CovariancePoint> cov_h_from_columns(
    const SampleMatrix& m, std::size_t col_origin,
    std::span<const double> offsets, std::span<const std::size_t> cols) {
  if (offsets.size() != cols.size())
    throw std::invalid_argument("cov_h_from_columns: size mismatch");
  std::vector<CovariancePoint> out(offsets.size());
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    const CovWithError c = cov_of_logs(m, cols[j], col_origin);
    out[j] = {offsets[j], c.cov, c.std_error,
              std::abs(c.cov) >= 2.0 * c.std_error};
  }
  return out;
}

CovWithError cov_of_log_diff(const SampleMatrix& m, std::size_t col_a,
                             std::size_t col_b, std::size_t col_o) {
  const std::size_t n = m.rows();
  if (n < 2) throw std::invalid_argument("cov_of_log_diff: need n >= 2");
  double md = 0.0, mo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    md += std::log(m.data[i * m.width + col_a]) -
          std::log(m.data[i * m.width + col_b]);
    mo += std::log(m.data[i * m.width + col_o]);
  }
  md /= n;
  mo /= n;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::log(m.data[i * m.width + col_a]) -
                     std::log(m.data[i * m.width + col_b]) - md;
    sum += d * (std::log(m.data[i * m.width + col_o]) - mo);
  }
  const double mean_w = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::log(m.data[i * m.width + col_a]) -
                     std::log(m.data[i * m.width + col_b]) - md;
    const double w = d * (std::log(m.data[i * m.width + col_o]) - mo);
    ss += (w - mean_w) * (w - mean_w);
  }
  const double nn = static_cast<double>(n);
  return {mean_w * nn / (nn - 1.0), std::sqrt(ss / (nn - 1.0) / nn)};
}

std::vector<CovariancePoint> estimate_cov_h(double t,
                                            std::span<const double> offsets,
                                            const EnsembleConfig& cfg) {
  const auto origin =
      std::find(offsets.begin(), offsets.end(), 0.0) - offsets.begin();
  if (static_cast<std::size_t>(origin) == offsets.size())
    throw std::invalid_argument("estimate_cov_h: offsets must include 0");
  const double times[] = {t};
  SampleMatrix m = flat_field_samples(cfg, times, offsets);
  std::vector<std::size_t> cols(offsets.size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  return cov_h_from_columns(m, static_cast<std::size_t>(origin), offsets,
                            cols);
}

double discrete_propagator(const GridSpec& grid, double duration, double x,
                           double y) {
  grid.validate();
  if (!(duration > 0.0))
    throw std::domain_error("discrete_propagator: duration > 0");
  DiffusionSolver solver(grid);
  std::vector<double> v(grid.n_cells(), 0.0);
  v[grid.index_of(y)] = 1.0 / grid.dx;
  const std::uint64_t steps = grid.step_of(duration);
  for (std::uint64_t k = 0; k < steps; ++k) solver.solve_in_place(v);
  return v[grid.index_of(x)];
}

GreenM2Estimate estimate_normalized_green_m2(double tau,
                                             const EnsembleConfig& cfg,
                                             double x, double y) {
  cfg.grid.validate();
  const double norm = discrete_propagator(cfg.grid, tau, x, y);
  const GridSpec grid = cfg.grid;
  const double beta = cfg.beta;
  const std::uint64_t seed = cfg.seed;
  const std::size_t cell = grid.index_of(x);
  SampleMatrix m;
  m.width = 1;
  m.data = run_samples(cfg.n_samples, 1,
                       [&grid, beta, seed, y, tau, norm, cell](
                           std::uint64_t sample, std::span<double> row) {
                         Simulator sim(grid, beta, seed);
                         FieldState f = sim.delta_state(y, 0.0);
                         sim.advance(f, sample, tau);
                         row[0] = f.values[cell] / norm;
                       });
  GreenM2Estimate out;
  std::vector<std::pair<std::string, double>> params = {
      {"tau", tau}, {"x", x}, {"y", y}, {"beta", cfg.beta}};
  out.m2 = make_estimate(
      "normalized_propagator_m2", params,
      mapped_stats(m, 0, [](double v) { return v * v; }), cfg);
  out.mean_one = make_estimate("normalized_propagator_mean", params,
                               mapped_stats(m, 0, [](double v) { return v; }),
                               cfg);
  return out;
}

std::vector<Estimate> b_tilde_profile(double t, double s,
                                      std::span<const double> separations,
                                      const EnsembleConfig& cfg) {
  cfg.grid.validate();
  if (!(t > s) || s < 0.0)
    throw std::domain_error("b_tilde_profile: need 0 <= s < t");
  const std::size_t k = separations.size();
  if (k == 0) throw std::invalid_argument("b_tilde_profile: no separations");
  const GridSpec grid = cfg.grid;
  std::vector<double> norms(k);
  std::vector<std::size_t> cells(k);
  std::vector<double> ys(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double sep = separations[j];
    const double x = 0.5 * sep;
    ys[j] = -0.5 * sep;
    norms[j] = discrete_propagator(grid, t - s, x, ys[j]);
    cells[j] = grid.index_of(x);
  }
  const double beta = cfg.beta;
  const std::uint64_t seed = cfg.seed;
  SampleMatrix m;
  m.width = k;
  m.data = run_samples(
      cfg.n_samples, k,
      [&](std::uint64_t sample, std::span<double> row) {
        Simulator sim(grid, beta, seed);
        FieldState flat = sim.flat_state(s);
        std::vector<FieldState> greens;
        greens.reserve(k);
        for (std::size_t j = 0; j < k; ++j)
          greens.push_back(sim.delta_state(ys[j], s));
        std::vector<FieldState*> all;
        all.push_back(&flat);
        for (FieldState& g : greens) all.push_back(&g);
        sim.advance(std::span<FieldState*>(all.data(), all.size()), sample, t);
        for (std::size_t j = 0; j < k; ++j)
          row[j] = greens[j].values[cells[j]] / norms[j] / flat.values[cells[j]];
      });
  std::vector<Estimate> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.push_back(make_estimate(
        "boundary_layer_ratio",
        {{"t", t}, {"s", s}, {"x", 0.5 * separations[j]},
         {"y", -0.5 * separations[j]}, {"beta", cfg.beta}},
        mapped_stats(m, j, [](double v) { return v; }), cfg));
  }
  return out;
}

Estimate estimate_b_tilde(double t, double s, double x, double y,
                          const EnsembleConfig& cfg) {
  cfg.grid.validate();
  if (!(t > s) || s < 0.0)
    throw std::domain_error("estimate_b_tilde: need 0 <= s < t");
  const GridSpec grid = cfg.grid;
  const double beta = cfg.beta;
  const std::uint64_t seed = cfg.seed;
  const double norm = discrete_propagator(grid, t - s, x, y);
  const std::size_t cell = grid.index_of(x);
  SampleMatrix m;
  m.width = 1;
  m.data = run_samples(
      cfg.n_samples, 1,
      [&grid, beta, seed, s, t, y, norm, cell](std::uint64_t sample,
                                               std::span<double> row) {
        Simulator sim(grid, beta, seed);
        FieldState flat = sim.flat_state(s);
        FieldState green = sim.delta_state(y, s);
        FieldState* fields[] = {&flat, &green};
        sim.advance(std::span<FieldState*>(fields, 2), sample, t);
        row[0] = green.values[cell] / norm / flat.values[cell];
      });
  return make_estimate(
      "boundary_layer_ratio",
      {{"t", t}, {"s", s}, {"x", x}, {"y", y}, {"beta", cfg.beta}},
      mapped_stats(m, 0, [](double v) { return v; }), cfg);
}

}  // namespace shelab
