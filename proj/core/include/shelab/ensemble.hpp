#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace shelab {

// Worker count: SHELAB_WORKERS if set, else hardware concurrency.
unsigned worker_count();

// Evaluates fn(sample, row) for sample in [0, n_samples), row_width doubles
// per sample, in parallel. Every row is a pure function of its sample index,
// so the stored matrix is identical for any worker count; all reductions
// happen afterwards in index order.
std::vector<double> run_samples(
    std::size_t n_samples, std::size_t row_width,
    const std::function<void(std::uint64_t, std::span<double>)>& fn);

// Compensated (Kahan) mean over a strided column.
double column_mean(std::span<const double> rows, std::size_t row_width,
                   std::size_t column);
// Standard error of the mean, two-pass.
double column_std_error(std::span<const double> rows, std::size_t row_width,
                        std::size_t column);

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanWithError column_stats(std::span<const double> rows, std::size_t row_width,
                           std::size_t column);

// Unbiased sample covariance of two columns plus the standard error of that
// covariance (spread of the centered products).
struct CovWithError {
  double cov = 0.0;
  double std_error = 0.0;
};
CovWithError column_cov(std::span<const double> rows, std::size_t row_width,
                        std::size_t col_a, std::size_t col_b);

}  // namespace shelab
