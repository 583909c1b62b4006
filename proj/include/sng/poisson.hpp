#pragma once

#include <array>
#include <memory>
#include <vector>

#include "sng/fft.hpp"
#include "sng/field.hpp"

namespace sng {

/// How the 3D Green's function -G/r is put on the padded lattice.
enum class KernelScheme {
  /// Truncated-spectral kernel in 3D, softened point kernel in 1D.
  kAuto,
  /// -G/r sampled at cell separations; the r = 0 cell holds the cell average of -G/r.
  kPointSampled,
  /// Band-limited kernel of -G/r truncated at R = sqrt(3)·L, built on a 4x
  /// oversampled lattice.  Spectrally accurate for smooth, resolved densities.
  kTruncatedSpectral,
};

/// Free-space Green's function tabulated on the 2x zero-padded grid.
struct GravityKernel {
  std::shared_ptr<const Grid> grid;
  KernelScheme scheme = KernelScheme::kAuto;
  double newton_G = 0.0;
  double softening = 0.0;
  int padded_points = 0;
  /// Kernel value at each padded-grid separation (index i <-> separation min(i, 2n-i)).
  std::vector<double> real_space;
  /// r2c transform of real_space with the quadrature weight h^d and the
  /// inverse-transform normalization folded in.
  std::vector<cplx> spectrum;

  /// Kernel value at a separation given in cells, |offset| < n on each axis.
  double value_at(const std::array<int, 3>& offset) const;
};

/// ∫ over a unit cube centred on the origin of 1/r, i.e. h·<1/r>_cell.
inline constexpr double kUnitCubeInverseDistance = 2.3800773639795534;

GravityKernel build_kernel(const std::shared_ptr<const Grid>& grid, const PhysicalParams& params,
                           KernelScheme scheme = KernelScheme::kAuto);

/// Newton potential in energy-per-mass units.
struct PotentialField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;

  double min() const;
  double max_abs() const;
};

/// Padded convolution Φ = K ⊛ ρ with cached plans and scratch buffers.
class PoissonSolver {
 public:
  explicit PoissonSolver(GravityKernel kernel);

  const GravityKernel& kernel() const noexcept { return kernel_; }

  PotentialField solve(const DensityField& density);
  /// Raw form used by the propagator; `density` and `potential` have grid size.
  void solve(std::span<const double> density, std::span<double> potential);

 private:
  GravityKernel kernel_;
  RealFft fft_;
  std::vector<double> padded_;
  std::vector<cplx> spectral_;
};

PotentialField solve_potential(const DensityField& density, const GravityKernel& kernel);

}  // namespace sng
