#include "sng/grid.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

void validate(const GridSpec& spec) {
  if (spec.dimension != 1 && spec.dimension != 3) {
    throw ConfigError(fmt::format("grid dimension must be 1 or 3, got {}", spec.dimension));
  }
  const int n = spec.points_per_axis;
  if (n < 2 || (n & (n - 1)) != 0) {
    throw ConfigError(fmt::format("points per axis must be a power of two >= 2, got {}", n));
  }
  if (!(spec.box_length > 0.0) || !std::isfinite(spec.box_length)) {
    throw ConfigError(fmt::format("box length must be positive, got {}", spec.box_length));
  }
}

Grid::Grid(GridSpec spec) : spec_(spec) {
  validate(spec_);
  const int n = spec_.points_per_axis;
  spacing_ = spec_.spacing();
  cell_volume_ = std::pow(spacing_, spec_.dimension);
  size_ = 1;
  for (int d = 0; d < spec_.dimension; ++d) size_ *= static_cast<std::size_t>(n);

  coords_.resize(n);
  wavenumbers_.resize(n);
  const double dk = 2.0 * std::numbers::pi / spec_.box_length;
  for (int i = 0; i < n; ++i) {
    coords_[i] = (i - n / 2) * spacing_;
    wavenumbers_[i] = (i < n / 2 ? i : i - n) * dk;
  }
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const noexcept {
  const auto n = static_cast<std::size_t>(spec_.points_per_axis);
  if (spec_.dimension == 1) return {static_cast<int>(flat), 0, 0};
  return {static_cast<int>(flat / (n * n)), static_cast<int>((flat / n) % n),
          static_cast<int>(flat % n)};
}

Vec3 Grid::position(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  if (spec_.dimension == 1) return {coords_[idx[0]], 0.0, 0.0};
  return {coords_[idx[0]], coords_[idx[1]], coords_[idx[2]]};
}

double Grid::wavenumber_squared(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  double k2 = 0.0;
  for (int d = 0; d < spec_.dimension; ++d) k2 += wavenumbers_[idx[d]] * wavenumbers_[idx[d]];
  return k2;
}

double Grid::max_wavenumber_squared() const noexcept {
  const double k_nyq = std::numbers::pi / spacing_;
  return spec_.dimension * k_nyq * k_nyq;
}

std::shared_ptr<const Grid> build_grid(const GridSpec& spec) {
  return std::make_shared<const Grid>(spec);
}

}  // namespace sng
