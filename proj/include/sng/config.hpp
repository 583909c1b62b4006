#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sng/field.hpp"
#include "sng/grid.hpp"
#include "sng/poisson.hpp"
#include "sng/propagator.hpp"

namespace sng {

struct PacketSpec {
  Vec3 center{};
  double width = 1.0;
  Vec3 momentum{};
};

struct ScenarioConfig {
  std::string name = "scenario";
  GridSpec grid{1, 1024, 80.0};
  PhysicalParams physics;
  /// Unset means the smallest packet width.
  std::optional<double> softening;
  bool self_gravity = true;
  KernelScheme kernel = KernelScheme::kAuto;
  /// 1L, 1R, 2L, 2R.
  std::array<PacketSpec, 4> packets{};
  Schedule schedule{5e-4, 10000, 100};
  SourcingMode sourcing = SourcingMode::kMeanField;
  /// Entanglement measures on every k-th recorded row.
  std::size_t entanglement_stride = 1;
  double cross_block_threshold = 1e-6;
  double phase_guard = 0.5;
  double support_sigmas = 5.0;
  /// Empty: keep results in memory only.
  std::string output_directory;

  /// Physics parameters with the softening default resolved.
  PhysicalParams resolved_physics() const;
  PropagatorOptions propagator_options() const;
};

std::string to_string(KernelScheme scheme);

/// Sectioned key = value text; see README for the grammar.  Throws ParseError
/// with line and section for syntax errors, unknown keys, missing packets and
/// invalid values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Applies "section.key=value" (e.g. "packets.2R.center=4"); the last dotted
/// component is the key.
void apply_override(ScenarioConfig& config, const std::string& assignment);

/// Geometry and schedule checks that need the whole document (packet supports
/// inside the box, widths resolved by the grid).  Throws ConfigError.
void validate(const ScenarioConfig& config);

/// Resolved configuration in the same grammar parse_config reads.
std::string format_config(const ScenarioConfig& config);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
ScenarioConfig preset(const std::string& name);
std::string preset_text(const std::string& name);

}  // namespace sng
