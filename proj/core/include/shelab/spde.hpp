#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shelab/grid.hpp"
#include "shelab/noise.hpp"

namespace shelab {

struct FieldState {
  double t = 0.0;
  std::vector<double> values;
};

// Backward-Euler heat step (I - (dt/(2 dx^2)) Lap_h) u' = u on the periodic
// grid, solved by cyclic Thomas elimination with all coefficients (and the
// Sherman-Morrison correction vector) precomputed once. The matrix is an
// M-matrix, so positivity is preserved exactly.
class DiffusionSolver {
 public:
  explicit DiffusionSolver(const GridSpec& grid);
  void solve_in_place(std::vector<double>& u) const;

 private:
  std::size_t n_;
  double alpha_, vn_, zdenom_;
  std::vector<double> m_;    // 1/(pivot) per row
  std::vector<double> cm_;   // superdiagonal * m per row
  std::vector<double> z_;    // T^{-1} u correction vector
  mutable std::vector<double> work_;
};

// One dt of the splitting: implicit diffusion, then the mean-one exponential
// noise update value <- value * exp(beta*xi*dt - beta^2*dt/(2 dx)).
void step(FieldState& state, std::span<const double> xi, double beta,
          const GridSpec& grid, const DiffusionSolver& solver);

// Multiple fields advancing through the same noise slices (coupled runs share
// one NoiseSource stream, e.g. the normalized-propagator estimators).
class Simulator {
 public:
  Simulator(const GridSpec& grid, double beta, std::uint64_t seed,
            ShearSpec shear = {});

  // Starts a field of ones at time s (flat data).
  FieldState flat_state(double s = 0.0) const;
  // Starts a lattice delta 1/dx at cell nearest y, at time s.
  FieldState delta_state(double y, double s = 0.0) const;

  // Advances every field through the shared slices to time t.
  void advance(std::span<FieldState*> fields, std::uint64_t sample, double t);
  void advance(FieldState& field, std::uint64_t sample, double t);

  const GridSpec& grid() const { return grid_; }
  double beta() const { return beta_; }

 private:
  GridSpec grid_;
  double beta_;
  NoiseSource noise_;
  DiffusionSolver solver_;
  std::vector<double> xi_;
};

// Snapshot runs used by the harness and tests. `sample` selects the
// noise-stream row so ensembles can share one seed.
std::vector<FieldState> run_flat(const GridSpec& grid, double beta,
                                 std::uint64_t seed,
                                 std::span<const double> t_record,
                                 std::uint64_t sample = 0);
FieldState run_green(const GridSpec& grid, double beta, std::uint64_t seed,
                     double s, double y, double t, std::uint64_t sample = 0);

// Snapshot CSV: "# t=<t> seed=<seed> beta=<beta> dx=<dx> dt=<dt>" then x,value.
std::string snapshot_csv(const FieldState& field, const GridSpec& grid,
                         std::uint64_t seed, double beta);

}  // namespace shelab
