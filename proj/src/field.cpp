#include "sng/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

std::string PacketLabel::str() const {
  return fmt::format("{}{}", subsystem, side == Side::kL ? 'L' : 'R');
}

int mode_index(const PacketLabel& label) {
  for (int i = 0; i < 4; ++i) {
    if (kModeLabels[i] == label) return i;
  }
  throw UsageError(fmt::format("unknown packet label subsystem={}", label.subsystem));
}

PacketLabel parse_label(const std::string& text) {
  for (const auto& l : kModeLabels) {
    if (l.str() == text) return l;
  }
  throw UsageError(fmt::format("unknown packet label '{}' (expected 1L, 1R, 2L or 2R)", text));
}

void validate(const ModeSet& modes) {
  const auto& grid = modes.packets[0].grid;
  if (!grid) throw UsageError("mode set has no grid");
  for (int i = 0; i < 4; ++i) {
    const auto& p = modes.packets[i];
    if (!(p.label == kModeLabels[i])) {
      throw UsageError(fmt::format("mode set slot {} holds packet {}, expected {}", i,
                                   p.label.str(), kModeLabels[i].str()));
    }
    if (!p.grid || !(p.grid->spec() == grid->spec()) || p.amplitudes.size() != grid->size()) {
      throw UsageError(fmt::format("packet {} does not live on the shared grid", p.label.str()));
    }
  }
}

void validate(const PhysicalParams& params) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(params.hbar)) throw ConfigError("hbar must be positive");
  if (!positive(params.mass)) throw ConfigError("mass must be positive");
  if (params.boson_number < 1) throw ConfigError("boson number N must be >= 1");
  if (!(params.newton_G >= 0.0) || !std::isfinite(params.newton_G)) {
    throw ConfigError("newton G must be >= 0");
  }
  if (!positive(params.softening)) throw ConfigError("softening must be positive");
}

WavePacket gaussian_packet(const std::shared_ptr<const Grid>& grid, const Vec3& center,
                           double width, const Vec3& momentum, PacketLabel label,
                           double support_sigmas) {
  if (!grid) throw UsageError("gaussian_packet: null grid");
  const int dim = grid->dimension();
  if (!(width > grid->spacing())) {
    throw ConfigError(fmt::format("packet {}: width {} does not resolve above spacing {}",
                                  label.str(), width, grid->spacing()));
  }
  const double half = 0.5 * grid->box_length();
  for (int d = 0; d < dim; ++d) {
    const double lo = center[d] - support_sigmas * width;
    const double hi = center[d] + support_sigmas * width;
    if (lo < -half || hi > half) {
      throw ConfigError(fmt::format(
          "packet {}: support [{}, {}] on axis {} ({}σ rule) clips the box [{}, {}]",
          label.str(), lo, hi, d, support_sigmas, -half, half));
    }
  }

  WavePacket p{label, grid, std::vector<cplx>(grid->size())};
  const double inv4s2 = 1.0 / (4.0 * width * width);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Vec3 x = grid->position(i);
    double r2 = 0.0;
    double phase = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double dx = x[d] - center[d];
      r2 += dx * dx;
      phase += momentum[d] * x[d];
    }
    p.amplitudes[i] = std::polar(std::exp(-r2 * inv4s2), phase);
  }
  const double n = norm(p);
  for (auto& a : p.amplitudes) a /= n;
  return p;
}

cplx inner_product(const WavePacket& a, const WavePacket& b) {
  if (!a.grid || !b.grid || !(a.grid->spec() == b.grid->spec()) ||
      a.amplitudes.size() != b.amplitudes.size()) {
    throw UsageError(fmt::format("inner_product: packets {} and {} live on different grids",
                                 a.label.str(), b.label.str()));
  }
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    sum += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  }
  return sum * a.grid->cell_volume();
}

double norm(const WavePacket& p) {
  double s = 0.0;
  for (const auto& a : p.amplitudes) s += std::norm(a);
  return std::sqrt(s * p.grid->cell_volume());
}

PacketObservables packet_observables(const WavePacket& p) {
  const Grid& g = *p.grid;
  const int dim = g.dimension();
  double mass = 0.0;
  Vec3 first{};
  Vec3 second{};
  for (std::size_t i = 0; i < p.amplitudes.size(); ++i) {
    const double w = std::norm(p.amplitudes[i]);
    const Vec3 x = g.position(i);
    mass += w;
    for (int d = 0; d < dim; ++d) {
      first[d] += w * x[d];
      second[d] += w * x[d] * x[d];
    }
  }
  if (!(mass > 0.0)) {
    throw DegenerateInputError(fmt::format("packet {} has zero norm", p.label.str()));
  }
  PacketObservables obs;
  obs.norm = std::sqrt(mass * g.cell_volume());
  double var = 0.0;
  for (int d = 0; d < dim; ++d) {
    obs.mean_position[d] = first[d] / mass;
    var += second[d] / mass - obs.mean_position[d] * obs.mean_position[d];
  }
  obs.rms_width = std::sqrt(std::max(var, 0.0) / dim);
  return obs;
}

DensityField mass_density(std::span<const WavePacket> packets, const PhysicalParams& params,
                          std::span<const double> weights) {
  if (packets.empty()) throw UsageError("mass_density: no packets");
  if (packets.size() != weights.size()) {
    throw UsageError("mass_density: one weight per packet required");
  }
  const auto& grid = packets.front().grid;
  DensityField rho{grid, std::vector<double>(grid->size(), 0.0), 0.0};
  for (std::size_t a = 0; a < packets.size(); ++a) {
    if (weights[a] < 0.0) {
      throw UsageError(fmt::format("mass_density: negative weight {} for packet {}", weights[a],
                                   packets[a].label.str()));
    }
    if (!(packets[a].grid->spec() == grid->spec())) {
      throw UsageError("mass_density: packets live on different grids");
    }
    if (weights[a] == 0.0) continue;
    const double wm = weights[a] * params.mass;
    const auto& amp = packets[a].amplitudes;
    for (std::size_t i = 0; i < amp.size(); ++i) rho.values[i] += wm * std::norm(amp[i]);
  }
  double total = 0.0;
  for (double v : rho.values) total += v;
  rho.total_mass = total * grid->cell_volume();
  return rho;
}

DensityField mass_density(const ModeSet& modes, const PhysicalParams& params) {
  const double w = 0.5 * params.boson_number;
  const std::array<double, 4> weights{w, w, w, w};
  return mass_density(std::span<const WavePacket>(modes.packets), params, weights);
}

double boundary_clearance(const PacketObservables& obs, const Grid& grid) {
  const double half = 0.5 * grid.box_length();
  double clearance = std::numeric_limits<double>::infinity();
  if (!(obs.rms_width > 0.0)) return clearance;
  for (int d = 0; d < grid.dimension(); ++d) {
    clearance = std::min(clearance, (half - std::abs(obs.mean_position[d])) / obs.rms_width);
  }
  return clearance;
}

}  // namespace sng
