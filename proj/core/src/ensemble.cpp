#include "shelab/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace shelab {
namespace {

double kahan_sum(std::span<const double> rows, std::size_t row_width,
                 std::size_t column,
                 const std::function<double(double)>& map) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = column; i < rows.size(); i += row_width) {
    const double y = map(rows[i]) - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("SHELAB_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 4096) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

std::vector<double> run_samples(
    std::size_t n_samples, std::size_t row_width,
    const std::function<void(std::uint64_t, std::span<double>)>& fn) {
  std::vector<double> rows(n_samples * row_width, 0.0);
  const unsigned workers = std::min<std::size_t>(worker_count(), n_samples);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n_samples; ++i)
      fn(i, std::span<double>(rows.data() + i * row_width, row_width));
    return rows;
  }
  std::atomic<std::uint64_t> next{0};
  constexpr std::uint64_t kChunk = 8;
  std::exception_ptr error = nullptr;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= n_samples || failed.load(std::memory_order_relaxed)) return;
      const std::uint64_t end = std::min<std::uint64_t>(begin + kChunk, n_samples);
      try {
        for (std::uint64_t i = begin; i < end; ++i)
          fn(i, std::span<double>(rows.data() + i * row_width, row_width));
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

double column_mean(std::span<const double> rows, std::size_t row_width,
                   std::size_t column) {
  const std::size_t n = rows.size() / row_width;
  if (n == 0) throw std::invalid_argument("column_mean: empty");
  return kahan_sum(rows, row_width, column, [](double v) { return v; }) / n;
}

double column_std_error(std::span<const double> rows, std::size_t row_width,
                        std::size_t column) {
  return column_stats(rows, row_width, column).std_error;
}

MeanWithError column_stats(std::span<const double> rows, std::size_t row_width,
                           std::size_t column) {
  const std::size_t n = rows.size() / row_width;
  if (n < 2) return {n == 1 ? rows[column] : 0.0, 0.0};
  const double mean = column_mean(rows, row_width, column);
  const double ss = kahan_sum(rows, row_width, column, [mean](double v) {
    const double d = v - mean;
    return d * d;
  });
  return {mean, std::sqrt(ss / (static_cast<double>(n) - 1.0) /
                          static_cast<double>(n))};
}

CovWithError column_cov(std::span<const double> rows, std::size_t row_width,
                        std::size_t col_a, std::size_t col_b) {
  const std::size_t n = rows.size() / row_width;
  if (n < 2) throw std::invalid_argument("column_cov: need n >= 2");
  const double ma = column_mean(rows, row_width, col_a);
  const double mb = column_mean(rows, row_width, col_b);
  // centered products; their spread gives the covariance standard error
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        (rows[i * row_width + col_a] - ma) * (rows[i * row_width + col_b] - mb);
    const double y = w - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  const double mean_w = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        (rows[i * row_width + col_a] - ma) * (rows[i * row_width + col_b] - mb);
    const double d = w - mean_w;
    ss += d * d;
  }
  const double nn = static_cast<double>(n);
  return {mean_w * nn / (nn - 1.0), std::sqrt(ss / (nn - 1.0) / nn)};
}

}  // namespace shelab
