#include "shelab/noise.hpp"

#include <cmath>

namespace shelab {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t v =
      (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;  // 53 bits
  return (static_cast<double>(v) + 0.5) * 0x1.0p-53;      // in (0,1)
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::array<std::uint32_t, 4> ctr) {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return ctr;
}

long shear_shift_cells(const ShearSpec& shear, double t, double dx) {
  return std::lround(shear.nu * (t - shear.r) / dx);
}

NoiseSource::NoiseSource(std::uint64_t seed, const GridSpec& grid,
                         ShearSpec shear)
    : seed_(seed),
      shear_(shear),
      n_(grid.n_cells()),
      dx_(grid.dx),
      dt_(grid.dt),
      scale_(1.0 / std::sqrt(grid.dt * grid.dx)) {}

void NoiseSource::slice(std::uint64_t sample, std::uint64_t step,
                        std::vector<double>& out) const {
  out.resize(n_);
  const long n = static_cast<long>(n_);
  long offset = 0;
  if (shear_.nu != 0.0) {
    // out[i] = base[(i + shift) mod n]  <=>  out[(j - shift) mod n] = base[j]
    const long shift = shear_shift_cells(shear_, step * dt_, dx_);
    offset = (-shift) % n;
    if (offset < 0) offset += n;
  }
  const std::uint32_t s_lo = static_cast<std::uint32_t>(sample);
  const std::uint32_t s_hi = static_cast<std::uint32_t>(sample >> 32);
  const std::uint32_t st = static_cast<std::uint32_t>(step);
  for (std::size_t p = 0; 2 * p < n_; ++p) {
    const auto r = philox4x32(
        seed_, {st, s_lo, s_hi, static_cast<std::uint32_t>(p)});
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = kTwoPi * u2;
    const std::size_t j0 = 2 * p;
    const std::size_t i0 = (j0 + offset) % n_;
    out[i0] = scale_ * rad * std::cos(ang);
    if (j0 + 1 < n_) {
      const std::size_t i1 = (j0 + 1 + offset) % n_;
      out[i1] = scale_ * rad * std::sin(ang);
    }
  }
}

}  // namespace shelab
