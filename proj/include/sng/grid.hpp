#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace sng {

using Vec3 = std::array<double, 3>;

/// Uniform periodic grid, cubic in 3D.  Axis 0 is the slowest-varying index.
struct GridSpec {
  int dimension = 1;
  int points_per_axis = 0;
  double box_length = 0.0;

  double spacing() const { return box_length / points_per_axis; }
  bool operator==(const GridSpec&) const = default;
};

/// Throws ConfigError for an unusable GridSpec.
void validate(const GridSpec& spec);

class Grid {
 public:
  explicit Grid(GridSpec spec);

  const GridSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return spec_.dimension; }
  int points_per_axis() const noexcept { return spec_.points_per_axis; }
  double spacing() const noexcept { return spacing_; }
  double box_length() const noexcept { return spec_.box_length; }
  double cell_volume() const noexcept { return cell_volume_; }
  std::size_t size() const noexcept { return size_; }

  /// x_i = (i - n/2) h, identical on every axis.
  const std::vector<double>& coordinates() const noexcept { return coords_; }
  /// Standard FFT ordering: 0, 1, ..., n/2-1, -n/2, ..., -1 times 2π/L.
  const std::vector<double>& wavenumbers() const noexcept { return wavenumbers_; }

  /// Per-axis index of a flat point index.
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;
  Vec3 position(std::size_t flat) const noexcept;
  /// |k|^2 at a flat spectral index.
  double wavenumber_squared(std::size_t flat) const noexcept;
  double max_wavenumber_squared() const noexcept;

 private:
  GridSpec spec_;
  double spacing_;
  double cell_volume_;
  std::size_t size_;
  std::vector<double> coords_;
  std::vector<double> wavenumbers_;
};

std::shared_ptr<const Grid> build_grid(const GridSpec& spec);

}  // namespace sng
