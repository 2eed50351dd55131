#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shelab/grid.hpp"

namespace shelab {

// Philox4x32-10 block cipher. The (seed, sample, step, cell-pair) tuple maps
// to one 128-bit counter block, so every Gaussian is a pure function of its
// coordinates and the stream is identical for any thread layout.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::array<std::uint32_t, 4> ctr);

// Space-time shear: the transformed field reads the base noise at
// x + nu * (t - r); on the grid that is a cyclic index shift per slice.
struct ShearSpec {
  double r = 0.0;
  double nu = 0.0;
};

long shear_shift_cells(const ShearSpec& shear, double t, double dx);

// One time-slice of driving noise: per-cell Gaussians with variance
// 1/(dt*dx), i.e. standard normals scaled by 1/sqrt(dt*dx).
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, const GridSpec& grid, ShearSpec shear = {});

  // Fills out[0..n_cells) for the step covering [step*dt, (step+1)*dt).
  void slice(std::uint64_t sample, std::uint64_t step,
             std::vector<double>& out) const;

  std::uint64_t seed() const { return seed_; }
  const ShearSpec& shear() const { return shear_; }

 private:
  std::uint64_t seed_;
  ShearSpec shear_;
  std::size_t n_;
  double dx_, dt_, scale_;
};

}  // namespace shelab
