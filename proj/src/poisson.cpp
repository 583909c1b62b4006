#include "sng/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

namespace {

// Separation in cells represented by padded index i on a 2n lattice; the
// index n plane is never reached by in-box pairs and is left at zero.
int padded_separation(int i, int n) { return i <= n ? i : 2 * n - i; }

std::vector<double> softened_line_kernel(int n, double h, double G, double a) {
  std::vector<double> k(2 * n, 0.0);
  for (int i = 0; i < 2 * n; ++i) {
    if (i == n) continue;
    const double x = padded_separation(i, n) * h;
    k[i] = -G / std::sqrt(x * x + a * a);
  }
  return k;
}

std::vector<double> point_sampled_kernel(int n, double h, double G) {
  const int m = 2 * n;
  std::vector<double> k(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (i == n) continue;
    const int si = padded_separation(i, n);
    for (int j = 0; j < m; ++j) {
      if (j == n) continue;
      const int sj = padded_separation(j, n);
      for (int l = 0; l < m; ++l) {
        if (l == n) continue;
        const int sl = padded_separation(l, n);
        const double r = h * std::sqrt(double(si * si + sj * sj + sl * sl));
        k[(static_cast<std::size_t>(i) * m + j) * m + l] =
            r > 0.0 ? -G / r : -G * kUnitCubeInverseDistance / h;
      }
    }
  }
  return k;
}

// The kernel 1/r truncated at R has transform 4π(1 - cos kR)/k^2.  Sampling it
// on the wavenumbers of a period-4L box and transforming back (DCT-I, since
// the kernel is even) yields the real-space kernel whose linear convolution
// with any density supported in the box is exact up to the density's own
// band limit.  Only separations |s| <= n cells are kept.
std::vector<double> truncated_spectral_kernel(int n, double box, double G) {
  const int m_dct = 2 * n + 1;
  const double period = 4.0 * box;
  const double radius = std::sqrt(3.0) * box;
  const double dk = 2.0 * std::numbers::pi / period;

  std::vector<double> lattice(static_cast<std::size_t>(m_dct) * m_dct * m_dct);
  for (int i = 0; i < m_dct; ++i) {
    for (int j = 0; j < m_dct; ++j) {
      for (int l = 0; l < m_dct; ++l) {
        const double k = dk * std::sqrt(double(i * i + j * j + l * l));
        double value;
        if (k == 0.0) {
          value = 2.0 * std::numbers::pi * radius * radius;
        } else {
          const double s = std::sin(0.5 * k * radius);
          value = 8.0 * std::numbers::pi * s * s / (k * k);
        }
        lattice[(static_cast<std::size_t>(i) * m_dct + j) * m_dct + l] = value;
      }
    }
  }
  fftw_plan plan = fftw_plan_r2r_3d(m_dct, m_dct, m_dct, lattice.data(), lattice.data(),
                                    FFTW_REDFT00, FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE);
  if (!plan) throw Error("FFTW failed to build the DCT-I kernel plan");
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double scale = -G / (period * period * period);
  const int m = 2 * n;
  std::vector<double> k(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (i == n) continue;
    const int si = padded_separation(i, n);
    for (int j = 0; j < m; ++j) {
      if (j == n) continue;
      const int sj = padded_separation(j, n);
      for (int l = 0; l < m; ++l) {
        if (l == n) continue;
        const int sl = padded_separation(l, n);
        k[(static_cast<std::size_t>(i) * m + j) * m + l] =
            scale * lattice[(static_cast<std::size_t>(si) * m_dct + sj) * m_dct + sl];
      }
    }
  }
  return k;
}

}  // namespace

double GravityKernel::value_at(const std::array<int, 3>& offset) const {
  const int n = padded_points / 2;
  const int dim = grid->dimension();
  std::size_t flat = 0;
  for (int d = 0; d < dim; ++d) {
    if (std::abs(offset[d]) >= n) {
      throw UsageError(fmt::format("kernel offset {} outside (-{}, {})", offset[d], n, n));
    }
    const int i = offset[d] >= 0 ? offset[d] : padded_points + offset[d];
    flat = flat * padded_points + i;
  }
  return real_space[flat];
}

GravityKernel build_kernel(const std::shared_ptr<const Grid>& grid, const PhysicalParams& params,
                           KernelScheme scheme) {
  if (!grid) throw UsageError("build_kernel: null grid");
  const int n = grid->points_per_axis();
  const double h = grid->spacing();
  const int dim = grid->dimension();

  GravityKernel kernel;
  kernel.grid = grid;
  kernel.newton_G = params.newton_G;
  kernel.softening = params.softening;
  kernel.padded_points = 2 * n;

  if (dim == 1) {
    if (!(params.softening > 0.0)) {
      throw ConfigError("1D gravity kernel requires a positive softening length");
    }
    kernel.scheme = KernelScheme::kPointSampled;
    kernel.real_space = softened_line_kernel(n, h, params.newton_G, params.softening);
  } else {
    kernel.scheme = scheme == KernelScheme::kAuto ? KernelScheme::kTruncatedSpectral : scheme;
    kernel.real_space = kernel.scheme == KernelScheme::kPointSampled
                            ? point_sampled_kernel(n, h, params.newton_G)
                            : truncated_spectral_kernel(n, grid->box_length(), params.newton_G);
  }

  RealFft fft(dim, kernel.padded_points);
  std::vector<double> work = kernel.real_space;
  kernel.spectrum.resize(fft.spectral_size());
  fft.forward(work, kernel.spectrum);
  const double weight = grid->cell_volume() / static_cast<double>(fft.real_size());
  for (auto& c : kernel.spectrum) c *= weight;
  return kernel;
}

double PotentialField::min() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double PotentialField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

PoissonSolver::PoissonSolver(GravityKernel kernel)
    : kernel_(std::move(kernel)),
      fft_(kernel_.grid->dimension(), kernel_.padded_points),
      padded_(fft_.real_size()),
      spectral_(fft_.spectral_size()) {}

void PoissonSolver::solve(std::span<const double> density, std::span<double> potential) {
  const Grid& g = *kernel_.grid;
  const std::size_t n = g.points_per_axis();
  const std::size_t m = kernel_.padded_points;
  if (density.size() != g.size() || potential.size() != g.size()) {
    throw UsageError("solve_potential: density/potential size does not match the kernel grid");
  }
  std::fill(padded_.begin(), padded_.end(), 0.0);
  if (g.dimension() == 1) {
    std::copy(density.begin(), density.end(), padded_.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        std::copy_n(density.begin() + (i * n + j) * n, n, padded_.begin() + (i * m + j) * m);
  }
  fft_.forward(padded_, spectral_);
  for (std::size_t i = 0; i < spectral_.size(); ++i) spectral_[i] *= kernel_.spectrum[i];
  fft_.backward(spectral_, padded_);
  if (g.dimension() == 1) {
    std::copy_n(padded_.begin(), n, potential.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        std::copy_n(padded_.begin() + (i * m + j) * m, n, potential.begin() + (i * n + j) * n);
  }
}

PotentialField PoissonSolver::solve(const DensityField& density) {
  if (!density.grid || !(density.grid->spec() == kernel_.grid->spec())) {
    throw UsageError("solve_potential: density and kernel live on different grids");
  }
  PotentialField phi{density.grid, std::vector<double>(density.values.size())};
  solve(density.values, phi.values);
  return phi;
}

PotentialField solve_potential(const DensityField& density, const GravityKernel& kernel) {
  PoissonSolver solver(kernel);
  return solver.solve(density);
}

}  // namespace sng
