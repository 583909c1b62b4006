#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sng/grid.hpp"

namespace sng {

using cplx = std::complex<double>;

enum class Side { kL, kR };

/// (κ, i) with κ ∈ {L, R} and subsystem i ∈ {1, 2}.
struct PacketLabel {
  int subsystem = 1;
  Side side = Side::kL;

  std::string str() const;
  bool operator==(const PacketLabel&) const = default;
};

/// Canonical ModeSet order: 1L, 1R, 2L, 2R.
inline constexpr std::array<PacketLabel, 4> kModeLabels = {
    PacketLabel{1, Side::kL}, PacketLabel{1, Side::kR}, PacketLabel{2, Side::kL},
    PacketLabel{2, Side::kR}};

/// Index into kModeLabels, throws UsageError for unknown labels.
int mode_index(const PacketLabel& label);
PacketLabel parse_label(const std::string& text);

struct WavePacket {
  PacketLabel label;
  std::shared_ptr<const Grid> grid;
  std::vector<cplx> amplitudes;
};

struct ModeSet {
  std::array<WavePacket, 4> packets;

  WavePacket& operator[](const PacketLabel& l) { return packets[mode_index(l)]; }
  const WavePacket& operator[](const PacketLabel& l) const { return packets[mode_index(l)]; }
  const std::shared_ptr<const Grid>& grid() const { return packets[0].grid; }
};

/// Throws UsageError unless all four packets share one grid and carry the canonical labels.
void validate(const ModeSet& modes);

struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  int boson_number = 1;
  double newton_G = 0.0;
  /// 1D softened-kernel length; ignored in 3D.
  double softening = 1.0;
};

void validate(const PhysicalParams& params);

struct DensityField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;
  double total_mass = 0.0;
};

struct PacketObservables {
  double norm = 0.0;
  Vec3 mean_position{};
  /// sqrt of the position variance per axis (σ for an isotropic Gaussian).
  double rms_width = 0.0;
};

/// Normalized exp(-(x-c)^2/4σ^2 + i k0·x), isotropic in 3D.  The packet must
/// keep `support_sigmas`·σ clear of the box edges and σ must exceed the spacing.
WavePacket gaussian_packet(const std::shared_ptr<const Grid>& grid, const Vec3& center,
                           double width, const Vec3& momentum, PacketLabel label,
                           double support_sigmas = 5.0);

/// Σ conj(a)·b·h^d.
cplx inner_product(const WavePacket& a, const WavePacket& b);

double norm(const WavePacket& p);

PacketObservables packet_observables(const WavePacket& p);

/// ρ = Σ weight_a · m · |φ_a|^2.
DensityField mass_density(std::span<const WavePacket> packets, const PhysicalParams& params,
                          std::span<const double> weights);

/// Mean-field density: expectation weight N/2 on each of the four packets.
DensityField mass_density(const ModeSet& modes, const PhysicalParams& params);

/// Smallest distance, in units of the packet width, between the
/// packet's mean ± width band and the box edge.  Negative once it leaves.
double boundary_clearance(const PacketObservables& obs, const Grid& grid);

}  // namespace sng
