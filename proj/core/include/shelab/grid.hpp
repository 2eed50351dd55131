#pragma once

#include <cstddef>
#include <cstdint>

namespace shelab {

// Periodic 1-d grid on [-half_width, half_width): cell i sits at
// x_i = -half_width + i*dx, with dx * n_cells() == 2 * half_width.
struct GridSpec {
  double half_width = 8.0;
  double dx = 0.05;
  double dt = 1e-3;
  double t_max = 1.0;

  std::size_t n_cells() const;
  void validate() const;  // throws std::invalid_argument on a bad spec
  std::size_t index_of(double x) const;   // nearest cell, wrapped
  double x_of(std::size_t i) const;
  std::uint64_t step_of(double t) const;  // nearest step boundary
  // stability bound of the fully explicit update; the production stepper is
  // semi-implicit and does not need it, kept for configuration sanity checks
  bool explicit_stable() const { return dt <= 0.5 * dx * dx; }
};

}  // namespace shelab
