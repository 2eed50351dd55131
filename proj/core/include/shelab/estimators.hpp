#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shelab/ensemble.hpp"
#include "shelab/grid.hpp"

namespace shelab {

struct EnsembleConfig {
  GridSpec grid;
  double beta = 1.0;
  std::uint64_t seed = 20260818ull;
  std::size_t n_samples = 1000;
};

struct Estimate {
  std::string label;
  std::vector<std::pair<std::string, double>> params;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  GridSpec grid;
  bool low_precision = false;  // std_error exceeds 10% of |estimate|
};

// --- shared-ensemble building block ---------------------------------------
// One flat-data ensemble, recording the field at each (time, position) pair.
// Column layout: time-major, i.e. col = t_index * xs.size() + x_index.
struct SampleMatrix {
  std::vector<double> data;
  std::size_t width = 0;
  std::size_t rows() const { return width == 0 ? 0 : data.size() / width; }
};
SampleMatrix flat_field_samples(const EnsembleConfig& cfg,
                                std::span<const double> times,
                                std::span<const double> xs);

// --- point estimators ------------------------------------------------------
// E[Z(t,x)^p]; p = 0 short-circuits to (1, 0) without sampling.
Estimate estimate_moment(double t, double x, int p, const EnsembleConfig& cfg);
// same statistic from an existing matrix column (shared ensembles)
Estimate moment_from_column(const SampleMatrix& m, std::size_t column, double t,
                            double x, int p, const EnsembleConfig& cfg);

struct KappaEstimate {
  Estimate kappa_star;   // E[1/Z(t,0)]
  Estimate mean_sq_dev;  // E[(Z(t,0)-1)^2], same paths
  // E[1/Z] - 1 - E[(Z-1)^2], estimated per path as -(Z-1)^3/Z: adding the
  // mean-zero control variate Z-1 to (1/Z-1)-(Z-1)^2 collapses it to that.
  Estimate smalltime_gap;
  double kappa = 1.0;    // kappa_star^2
  double kappa_std_error = 0.0;  // delta method: 2 kappa_star se(kappa_star)
  double z_vs_one = 0.0;         // (kappa_star - 1) / se
  double max_inverse = 0.0;      // largest 1/Z seen, tail diagnostic
};
KappaEstimate estimate_kappa(double t, const EnsembleConfig& cfg);
// same quantities computed from an existing matrix column (shared ensembles)
KappaEstimate kappa_from_column(const SampleMatrix& m, std::size_t column,
                                double t, const EnsembleConfig& cfg);

// --- spatial covariance of the height profile ------------------------------
struct CovariancePoint {
  double x = 0.0;
  double cov = 0.0;
  double std_error = 0.0;
  bool reliable = false;  // |cov| >= 2 std_error
};
std::vector<CovariancePoint> estimate_cov_h(double t,
                                            std::span<const double> offsets,
                                            const EnsembleConfig& cfg);
std::vector<CovariancePoint> cov_h_from_columns(const SampleMatrix& m,
                                                std::size_t col_origin,
                                                std::span<const double> offsets,
                                                std::span<const std::size_t> cols);
// Cov(log a - log b, log o) over the sample rows, with the standard error of
// the same-path difference. Equals cov(a,o) - cov(b,o) exactly; the paired
// error is what a symmetry test needs, since cov(a,o) and cov(b,o) ride the
// same paths and their separate errors overstate the noise of the gap.
CovWithError cov_of_log_diff(const SampleMatrix& m, std::size_t col_a,
                             std::size_t col_b, std::size_t col_o);

// --- normalized propagator statistics ---------------------------------------
// The delta-data field is normalized by the scheme's own deterministic
// propagator (its beta = 0 evolution), which converges to the continuum
// p_{t-s}(x-y); with that normalization the mean is one exactly in law and
// the beta = 0 case collapses to the constant 1.
struct GreenM2Estimate {
  Estimate m2;        // E[Gbar^2]
  Estimate mean_one;  // E[Gbar]
};
GreenM2Estimate estimate_normalized_green_m2(double tau,
                                             const EnsembleConfig& cfg,
                                             double x = 0.0, double y = 0.0);

// E[ Gbar(t,x;s,y) / Ztilde(t,x;s) ] from coupled runs: the delta field and
// the flat field advance through identical noise slices.
Estimate estimate_b_tilde(double t, double s, double x, double y,
                          const EnsembleConfig& cfg);
// One flat field shared across several source separations (x = sep/2,
// y = -sep/2), one Estimate per separation.
std::vector<Estimate> b_tilde_profile(double t, double s,
                                      std::span<const double> separations,
                                      const EnsembleConfig& cfg);

// Deterministic propagator of the discrete scheme: delta data at y evolved
// with beta = 0 over duration; returned at the cell nearest x.
double discrete_propagator(const GridSpec& grid, double duration, double x,
                           double y);

std::string estimates_json(std::span<const Estimate> estimates);

}  // namespace shelab
