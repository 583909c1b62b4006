#pragma once

// Reference computations that share no code path with the library they check:
// direct quadrature, closed forms and a dense truncated Fock space.

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sng/fock.hpp"

namespace sng::oracle {

/// Composite Simpson rule with `intervals` (even) subintervals.
template <class F>
double simpson(F&& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// ∫ φ_L φ_R dx for real 1D Gaussians exp(-(x-c)^2/4σ^2) at ±d/2, by quadrature.
double gaussian_overlap_quadrature(double separation, double width);

/// Potential of a 3D Gaussian mass distribution (std. dev. `width`, total
/// `mass`) at radius r, integrating the Green's-function convolution shell by shell.
double gaussian_potential_shell(double r, double width, double mass, double G);

/// Closed form -(G M / r) erf(r / σ√2), with the r -> 0 limit.
double gaussian_potential_closed_form(double r, double width, double mass, double G);

/// 1D line density of a Gaussian with the softened kernel -G/sqrt(x^2 + a^2).
double softened_gaussian_potential(double x, double center, double width, double mass, double G,
                                   double softening);

/// σ0 sqrt(1 + (ħ t / 2 m σ0^2)^2).
double free_gaussian_width(double width0, double t, double hbar, double mass);

/// Closed-form G^{-1/2} of [[1, s], [s, 1]] for real s.
Eigen::Matrix2d lowdin_2x2(double s);

/// Truncated Fock space over `modes` modes with occupations 0..cutoff, built
/// from explicit dense creation matrices.
class DenseFock {
 public:
  DenseFock(int modes, int cutoff);

  int dimension() const noexcept { return dimension_; }
  Eigen::VectorXcd vacuum() const;
  /// (Σ_j c_j a†_j)^N |0> / sqrt(N!) by repeated dense matrix application.
  Eigen::VectorXcd fock_power(const Eigen::VectorXcd& c, int n) const;
  /// Dense index of an occupation vector.
  int index(const Occupation& occ) const;
  /// Amplitude of `state` at every dense index, zero elsewhere.
  Eigen::VectorXcd embed(const FockExpansion& state) const;

 private:
  int modes_;
  int cutoff_;
  int dimension_;
  std::vector<Eigen::MatrixXcd> creation_;
};

/// Entropy (bits) of a bipartite pure state from the eigenvalues of its
/// reduced density matrix ρ_1 = C C† / tr.
double reduced_density_entropy(const Eigen::MatrixXcd& coefficients);
/// 2 log2 Σ sqrt(λ_k) over the same eigenvalues.
double reduced_density_log_negativity(const Eigen::MatrixXcd& coefficients);

/// Σ_b a_b |N;c1^b> ⊗ |N;c2^b> assembled in dense Fock spaces, returned as the
/// (subsystem-1 index) x (subsystem-2 index) coefficient matrix.
Eigen::MatrixXcd dense_branch_state(const std::vector<Eigen::VectorXcd>& modes1,
                                    const std::vector<Eigen::VectorXcd>& modes2, int n,
                                    const Eigen::Vector4cd& amplitudes);

/// Point-mass branch amplitudes ½ exp(iθ_b), θ_b = -(t/ħ) G (N m)^2 / d_b, for
/// subsystem positions x1[κ], x2[λ] (branch order LL, LR, RL, RR).
Eigen::Vector4cd point_mass_branch_amplitudes(const std::array<double, 2>& x1,
                                              const std::array<double, 2>& x2, double t,
                                              double hbar, double mass, int n, double G);

/// Negativity of the ideal two-location state with branch phase defect
/// Δ = θ_LL + θ_RR - θ_LR - θ_RL: log2(1 + |sin(Δ/2)|).
double branch_phase_negativity(const Eigen::Vector4cd& amplitudes);

}  // namespace sng::oracle
