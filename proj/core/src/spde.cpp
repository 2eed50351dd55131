#include "shelab/spde.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace shelab {

DiffusionSolver::DiffusionSolver(const GridSpec& grid) {
  grid.validate();
  n_ = grid.n_cells();
  alpha_ = grid.dt / (2.0 * grid.dx * grid.dx);
  const double b = 1.0 + 2.0 * alpha_;
  const double gamma = -b;
  vn_ = -alpha_ / gamma;  // = alpha/b
  // T equals the cyclic matrix with corners dropped and both end pivots
  // adjusted; factor it once.
  std::vector<double> diag(n_, b);
  diag[0] = b - gamma;
  diag[n_ - 1] = b - alpha_ * alpha_ / gamma;
  m_.resize(n_);
  cm_.resize(n_);
  double den = diag[0];
  m_[0] = 1.0 / den;
  cm_[0] = -alpha_ / den;
  for (std::size_t i = 1; i < n_; ++i) {
    den = diag[i] + alpha_ * cm_[i - 1];
    m_[i] = 1.0 / den;
    cm_[i] = -alpha_ / den;
  }
  // z = T^{-1} u for u = (gamma, 0, ..., 0, -alpha)
  z_.assign(n_, 0.0);
  z_[0] = gamma;
  z_[n_ - 1] = -alpha_;
  work_.resize(n_);
  // in-place Thomas on z_
  z_[0] *= m_[0];
  for (std::size_t i = 1; i < n_; ++i)
    z_[i] = (z_[i] + alpha_ * z_[i - 1]) * m_[i];
  for (std::size_t i = n_ - 1; i-- > 0;) z_[i] -= cm_[i] * z_[i + 1];
  zdenom_ = 1.0 + z_[0] + vn_ * z_[n_ - 1];
}

void DiffusionSolver::solve_in_place(std::vector<double>& u) const {
  if (u.size() != n_) throw std::invalid_argument("DiffusionSolver: size");
  double* y = work_.data();
  y[0] = u[0] * m_[0];
  for (std::size_t i = 1; i < n_; ++i)
    y[i] = (u[i] + alpha_ * y[i - 1]) * m_[i];
  for (std::size_t i = n_ - 1; i-- > 0;) y[i] -= cm_[i] * y[i + 1];
  const double fac = (y[0] + vn_ * y[n_ - 1]) / zdenom_;
  for (std::size_t i = 0; i < n_; ++i) u[i] = y[i] - fac * z_[i];
}

void step(FieldState& state, std::span<const double> xi, double beta,
          const GridSpec& grid, const DiffusionSolver& solver) {
  if (xi.size() != state.values.size())
    throw std::invalid_argument("step: slice size mismatch");
  solver.solve_in_place(state.values);
  const double drift = beta * beta * grid.dt / (2.0 * grid.dx);
  const double bdt = beta * grid.dt;
  double* v = state.values.data();
  const std::size_t n = state.values.size();
  for (std::size_t i = 0; i < n; ++i) v[i] *= std::exp(bdt * xi[i] - drift);
  state.t += grid.dt;
}

Simulator::Simulator(const GridSpec& grid, double beta, std::uint64_t seed,
                     ShearSpec shear)
    : grid_(grid), beta_(beta), noise_(seed, grid, shear), solver_(grid) {
  grid_.validate();
  if (beta < 0.0) throw std::invalid_argument("Simulator: coupling >= 0");
}

FieldState Simulator::flat_state(double s) const {
  return {s, std::vector<double>(grid_.n_cells(), 1.0)};
}

FieldState Simulator::delta_state(double y, double s) const {
  std::vector<double> v(grid_.n_cells(), 0.0);
  v[grid_.index_of(y)] = 1.0 / grid_.dx;
  return {s, std::move(v)};
}

void Simulator::advance(std::span<FieldState*> fields, std::uint64_t sample,
                        double t) {
  if (fields.empty()) return;
  const std::uint64_t first = grid_.step_of(fields[0]->t);
  for (FieldState* f : fields)
    if (grid_.step_of(f->t) != first)
      throw std::invalid_argument("advance: fields out of sync");
  const std::uint64_t last = grid_.step_of(t);
  if (last < first) throw std::invalid_argument("advance: cannot go backward");
  for (std::uint64_t k = first; k < last; ++k) {
    noise_.slice(sample, k, xi_);
    for (FieldState* f : fields) step(*f, xi_, beta_, grid_, solver_);
  }
  for (FieldState* f : fields) f->t = last * grid_.dt;
}

void Simulator::advance(FieldState& field, std::uint64_t sample, double t) {
  FieldState* p = &field;
  advance(std::span<FieldState*>(&p, 1), sample, t);
}

std::vector<FieldState> run_flat(const GridSpec& grid, double beta,
                                 std::uint64_t seed,
                                 std::span<const double> t_record,
                                 std::uint64_t sample) {
  Simulator sim(grid, beta, seed);
  FieldState f = sim.flat_state(0.0);
  std::vector<FieldState> out;
  out.reserve(t_record.size());
  for (double t : t_record) {
    sim.advance(f, sample, t);
    out.push_back(f);
  }
  return out;
}

FieldState run_green(const GridSpec& grid, double beta, std::uint64_t seed,
                     double s, double y, double t, std::uint64_t sample) {
  if (!(t > s)) throw std::invalid_argument("run_green: need t > s");
  Simulator sim(grid, beta, seed);
  FieldState f = sim.delta_state(y, s);
  sim.advance(f, sample, t);
  return f;
}

std::string snapshot_csv(const FieldState& field, const GridSpec& grid,
                         std::uint64_t seed, double beta) {
  char head[160];
  std::snprintf(head, sizeof(head),
                "# t=%.17g seed=%llu beta=%.17g dx=%.17g dt=%.17g\nx,value\n",
                field.t, static_cast<unsigned long long>(seed), beta, grid.dx,
                grid.dt);
  std::string s = head;
  char row[80];
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g\n", grid.x_of(i),
                  field.values[i]);
    s += row;
  }
  return s;
}

}  // namespace shelab
