#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "sng/field.hpp"

namespace sng::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20251017);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::complex<double> random_complex() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

inline Eigen::VectorXcd random_unit_vector(int k) {
  Eigen::VectorXcd v(k);
  for (int j = 0; j < k; ++j) v[j] = random_complex();
  return v.normalized();
}

inline Eigen::MatrixXcd random_unitary(int k) {
  Eigen::MatrixXcd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = random_complex();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(k, k);
}

inline WavePacket random_packet(const std::shared_ptr<const Grid>& grid, PacketLabel label = {}) {
  WavePacket p{label, grid, std::vector<cplx>(grid->size())};
  for (auto& a : p.amplitudes) a = random_complex();
  return p;
}

/// Four Gaussians with common width at the given 1D centers.
inline ModeSet line_modes(const std::shared_ptr<const Grid>& grid, const std::array<double, 4>& x,
                          double width) {
  ModeSet m;
  for (int a = 0; a < 4; ++a) {
    m.packets[a] = gaussian_packet(grid, {x[a], 0.0, 0.0}, width, {}, kModeLabels[a]);
  }
  return m;
}

}  // namespace sng::test
