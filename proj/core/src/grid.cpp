#include "shelab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace shelab {

std::size_t GridSpec::n_cells() const {
  return static_cast<std::size_t>(std::llround(2.0 * half_width / dx));
}

void GridSpec::validate() const {
  if (!(half_width > 0.0) || !(dx > 0.0) || !(dt > 0.0) || !(t_max > 0.0))
    throw std::invalid_argument("GridSpec: dimensions must be positive");
  const double n = 2.0 * half_width / dx;
  if (std::abs(n - std::llround(n)) > 1e-9 * n || std::llround(n) < 4)
    throw std::invalid_argument("GridSpec: dx must tile 2*half_width");
  const double steps = t_max / dt;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * steps)
    throw std::invalid_argument("GridSpec: dt must tile t_max");
}

std::size_t GridSpec::index_of(double x) const {
  const long long n = static_cast<long long>(n_cells());
  long long i = std::llround((x + half_width) / dx);
  i %= n;
  if (i < 0) i += n;
  return static_cast<std::size_t>(i);
}

double GridSpec::x_of(std::size_t i) const { return -half_width + i * dx; }

std::uint64_t GridSpec::step_of(double t) const {
  if (t < 0.0) throw std::invalid_argument("GridSpec: negative time");
  return static_cast<std::uint64_t>(std::llround(t / dt));
}

}  // namespace shelab
