#include "sng/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "sng/error.hpp"

namespace sng {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(fmt::format("'{}' is not a finite number", text));
  }
  return v;
}

long to_integer(const std::string& text) {
  const double v = to_double(text);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    throw ConfigError(fmt::format("'{}' is not an integer", text));
  }
  return static_cast<long>(v);
}

std::size_t to_count(const std::string& text) {
  const long v = to_integer(text);
  if (v < 0) throw ConfigError(fmt::format("'{}' must not be negative", text));
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(fmt::format("'{}' is not a boolean (true/false)", text));
}

Vec3 to_vec3(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  Vec3 v{};
  std::string item;
  int count = 0;
  while (in >> item) {
    if (count == 3) throw ConfigError(fmt::format("'{}' has more than three components", text));
    v[count++] = to_double(item);
  }
  if (count == 0) throw ConfigError("empty vector");
  return v;
}

KernelScheme to_kernel(const std::string& text) {
  if (text == "auto") return KernelScheme::kAuto;
  if (text == "point") return KernelScheme::kPointSampled;
  if (text == "spectral") return KernelScheme::kTruncatedSpectral;
  throw ConfigError(fmt::format("unknown kernel '{}' (expected auto, point or spectral)", text));
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string format_vec(const Vec3& v, int dimension) {
  if (dimension == 1) return format_number(v[0]);
  return fmt::format("{}, {}, {}", v[0], v[1], v[2]);
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

/// section -> key -> setter
const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const auto table = [] {
    std::map<std::string, std::map<std::string, Setter>> t;
    t["grid"] = {
        {"dimension", [](ScenarioConfig& c, const std::string& v) { c.grid.dimension = int(to_integer(v)); }},
        {"points", [](ScenarioConfig& c, const std::string& v) { c.grid.points_per_axis = int(to_integer(v)); }},
        {"box", [](ScenarioConfig& c, const std::string& v) { c.grid.box_length = to_double(v); }},
    };
    t["physics"] = {
        {"hbar", [](ScenarioConfig& c, const std::string& v) { c.physics.hbar = to_double(v); }},
        {"mass", [](ScenarioConfig& c, const std::string& v) { c.physics.mass = to_double(v); }},
        {"N", [](ScenarioConfig& c, const std::string& v) { c.physics.boson_number = int(to_integer(v)); }},
        {"G", [](ScenarioConfig& c, const std::string& v) { c.physics.newton_G = to_double(v); }},
        {"softening",
         [](ScenarioConfig& c, const std::string& v) {
           if (v == "auto") c.softening.reset(); else c.softening = to_double(v);
         }},
        {"self_gravity", [](ScenarioConfig& c, const std::string& v) { c.self_gravity = to_bool(v); }},
        {"kernel", [](ScenarioConfig& c, const std::string& v) { c.kernel = to_kernel(v); }},
    };
    for (int a = 0; a < 4; ++a) {
      t["packets." + kModeLabels[a].str()] = {
          {"center", [a](ScenarioConfig& c, const std::string& v) { c.packets[a].center = to_vec3(v); }},
          {"width", [a](ScenarioConfig& c, const std::string& v) { c.packets[a].width = to_double(v); }},
          {"momentum", [a](ScenarioConfig& c, const std::string& v) { c.packets[a].momentum = to_vec3(v); }},
      };
    }
    t["schedule"] = {
        {"dt", [](ScenarioConfig& c, const std::string& v) { c.schedule.dt = to_double(v); }},
        {"steps", [](ScenarioConfig& c, const std::string& v) { c.schedule.n_steps = to_count(v); }},
        {"record_stride", [](ScenarioConfig& c, const std::string& v) { c.schedule.record_stride = to_count(v); }},
    };
    t["run"] = {
        {"name", [](ScenarioConfig& c, const std::string& v) { c.name = v; }},
        {"sourcing", [](ScenarioConfig& c, const std::string& v) { c.sourcing = parse_sourcing(v); }},
        {"entanglement_stride", [](ScenarioConfig& c, const std::string& v) { c.entanglement_stride = to_count(v); }},
        {"cross_block_threshold", [](ScenarioConfig& c, const std::string& v) { c.cross_block_threshold = to_double(v); }},
        {"phase_guard", [](ScenarioConfig& c, const std::string& v) { c.phase_guard = to_double(v); }},
        {"support_sigmas", [](ScenarioConfig& c, const std::string& v) { c.support_sigmas = to_double(v); }},
    };
    t["output"] = {
        {"directory", [](ScenarioConfig& c, const std::string& v) { c.output_directory = v; }},
    };
    return t;
  }();
  return table;
}

void assign(ScenarioConfig& c, const std::string& section, const std::string& key,
            const std::string& value) {
  const auto& table = setters();
  const auto s = table.find(section);
  if (s == table.end()) throw ConfigError(fmt::format("unknown section [{}]", section));
  const auto k = s->second.find(key);
  if (k == s->second.end()) {
    throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
  }
  k->second(c, value);
}

void validate_packet(const ScenarioConfig& c, int a) {
  const auto& p = c.packets[a];
  const std::string label = kModeLabels[a].str();
  if (!(p.width > 0.0)) throw ConfigError(fmt::format("packet {}: width must be positive", label));
  for (int d = c.grid.dimension; d < 3; ++d) {
    if (p.center[d] != 0.0 || p.momentum[d] != 0.0) {
      throw ConfigError(fmt::format("packet {}: {}D run but component {} is nonzero", label,
                                    c.grid.dimension, d));
    }
  }
  const double h = c.grid.spacing();
  if (p.width <= h) {
    throw ConfigError(fmt::format("packet {}: width {} does not exceed the grid spacing {}",
                                  label, p.width, h));
  }
  const double half = 0.5 * c.grid.box_length;
  for (int d = 0; d < c.grid.dimension; ++d) {
    if (std::abs(p.center[d]) + c.support_sigmas * p.width > half) {
      throw ConfigError(fmt::format(
          "packet {}: {}σ support around {} leaves the box [-{}, {}] on axis {}", label,
          c.support_sigmas, p.center[d], half, half, d));
    }
  }
}

void validate_other(const ScenarioConfig& c) {
  validate(c.grid);
  validate(c.resolved_physics());
  validate(c.schedule);
  if (c.entanglement_stride < 1) throw ConfigError("entanglement_stride must be >= 1");
  if (!(c.cross_block_threshold >= 0.0)) throw ConfigError("cross_block_threshold must be >= 0");
  if (!(c.phase_guard > 0.0)) throw ConfigError("phase_guard must be positive");
  if (!(c.support_sigmas > 0.0)) throw ConfigError("support_sigmas must be positive");
  if (c.softening && !(*c.softening > 0.0)) throw ConfigError("softening must be positive");
}

}  // namespace

std::string to_string(KernelScheme scheme) {
  switch (scheme) {
    case KernelScheme::kAuto: return "auto";
    case KernelScheme::kPointSampled: return "point";
    case KernelScheme::kTruncatedSpectral: return "spectral";
  }
  return "?";
}

PhysicalParams ScenarioConfig::resolved_physics() const {
  PhysicalParams p = physics;
  double smallest = packets[0].width;
  for (const auto& s : packets) smallest = std::min(smallest, s.width);
  p.softening = softening.value_or(smallest);
  return p;
}

PropagatorOptions ScenarioConfig::propagator_options() const {
  return PropagatorOptions{phase_guard, self_gravity, kernel};
}

void validate(const ScenarioConfig& config) {
  validate_other(config);
  for (int a = 0; a < 4; ++a) validate_packet(config, a);
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  std::map<std::string, int> section_lines;
  std::set<std::pair<std::string, std::string>> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no, section);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!setters().count(section)) {
        throw ParseError(fmt::format("line {}: unknown section [{}]", line_no, section), line_no,
                         section);
      }
      if (!section_lines.emplace(section, line_no).second) {
        throw ParseError(fmt::format("line {}: section [{}] repeated (first at line {})",
                                     line_no, section, section_lines[section]),
                         line_no, section);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(fmt::format("line {}: expected 'key = value' in [{}]", line_no, section),
                       line_no, section);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) {
      throw ParseError(fmt::format("line {}: key '{}' outside any section", line_no, key),
                       line_no, section);
    }
    if (!seen.emplace(section, key).second) {
      throw ParseError(fmt::format("line {}: key '{}' repeated in [{}]", line_no, key, section),
                       line_no, section);
    }
    try {
      assign(c, section, key, value);
    } catch (const ConfigError& e) {
      throw ParseError(fmt::format("line {} [{}]: {}", line_no, section, e.what()), line_no,
                       section);
    }
  }

  for (const auto& l : kModeLabels) {
    const std::string name = "packets." + l.str();
    if (!section_lines.count(name)) {
      throw ParseError(fmt::format("missing packet section [{}] (label {})", name, l.str()), 0,
                       name);
    }
  }

  auto line_of = [&](const std::string& s) {
    const auto it = section_lines.find(s);
    return it == section_lines.end() ? 0 : it->second;
  };
  try {
    validate_other(c);
  } catch (const ConfigError& e) {
    throw ParseError(fmt::format("invalid configuration: {}", e.what()), 0, "");
  }
  for (int a = 0; a < 4; ++a) {
    const std::string name = "packets." + kModeLabels[a].str();
    try {
      validate_packet(c, a);
    } catch (const ConfigError& e) {
      throw ParseError(fmt::format("line {} [{}]: {}", line_of(name), name, e.what()),
                       line_of(name), name);
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(fmt::format("override '{}' is not section.key=value", assignment));
  }
  const std::string path = trim(std::string_view(assignment).substr(0, eq));
  const std::string value = trim(std::string_view(assignment).substr(eq + 1));
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || dot == 0) {
    throw ConfigError(fmt::format("override '{}' needs a section prefix", assignment));
  }
  try {
    assign(config, path.substr(0, dot), path.substr(dot + 1), value);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("override '{}': {}", assignment, e.what()));
  }
}

std::string format_config(const ScenarioConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  out += "[run]\n";
  line("name", c.name);
  line("sourcing", to_string(c.sourcing));
  line("entanglement_stride", fmt::format("{}", c.entanglement_stride));
  line("cross_block_threshold", format_number(c.cross_block_threshold));
  line("phase_guard", format_number(c.phase_guard));
  line("support_sigmas", format_number(c.support_sigmas));
  out += "\n[grid]\n";
  line("dimension", fmt::format("{}", c.grid.dimension));
  line("points", fmt::format("{}", c.grid.points_per_axis));
  line("box", format_number(c.grid.box_length));
  out += "\n[physics]\n";
  line("hbar", format_number(c.physics.hbar));
  line("mass", format_number(c.physics.mass));
  line("N", fmt::format("{}", c.physics.boson_number));
  line("G", format_number(c.physics.newton_G));
  line("softening", c.softening ? format_number(*c.softening) : "auto");
  line("self_gravity", c.self_gravity ? "true" : "false");
  line("kernel", to_string(c.kernel));
  for (int a = 0; a < 4; ++a) {
    out += fmt::format("\n[packets.{}]\n", kModeLabels[a].str());
    line("center", format_vec(c.packets[a].center, c.grid.dimension));
    line("width", format_number(c.packets[a].width));
    line("momentum", format_vec(c.packets[a].momentum, c.grid.dimension));
  }
  out += "\n[schedule]\n";
  line("dt", format_number(c.schedule.dt));
  line("steps", fmt::format("{}", c.schedule.n_steps));
  line("record_stride", fmt::format("{}", c.schedule.record_stride));
  out += "\n[output]\n";
  line("directory", c.output_directory);
  return out;
}

namespace {

const std::map<std::string, std::string>& preset_table() {
  static const std::map<std::string, std::string> table = {
      {"paper-1d", R"([run]
name = paper-1d
sourcing = mean-field

[grid]
dimension = 1
points = 1024
box = 80

[physics]
N = 2
G = 0.1

[packets.1L]
center = -18
[packets.1R]
center = -6
[packets.2L]
center = 6
[packets.2R]
center = 18

[schedule]
dt = 5e-4
steps = 10000
record_stride = 100
)"},
      {"paper-3d", R"([run]
name = paper-3d
sourcing = mean-field

[grid]
dimension = 3
points = 64
box = 32

[physics]
N = 2
G = 0.1

# subsystem 1 at x = -7, subsystem 2 at x = +7, L/R split along y
[packets.1L]
center = -7, -7, 0
[packets.1R]
center = -7, 7, 0
[packets.2L]
center = 7, -7, 0
[packets.2R]
center = 7, 7, 0

[schedule]
dt = 5e-3
steps = 200
record_stride = 20
)"},
      {"control-branch", R"([run]
name = control-branch
sourcing = branch-resolved

[grid]
dimension = 1
points = 1024
box = 80

# G m^2 = 0.25, N = 1: about 0.1 rad of differential branch phase by t = 5
[physics]
N = 1
mass = 4
G = 0.0625

[packets.1L]
center = -24
width = 0.5
[packets.1R]
center = -8
width = 0.5
[packets.2L]
center = 8
width = 0.5
[packets.2R]
center = 24
width = 0.5

[schedule]
dt = 1e-3
steps = 5000
record_stride = 50
)"},
      {"free", R"([run]
name = free
sourcing = none

[grid]
dimension = 1
points = 1024
box = 80

[physics]
N = 2
G = 0

[packets.1L]
center = -18
[packets.1R]
center = -6
[packets.2L]
center = 6
[packets.2R]
center = 18

[schedule]
dt = 5e-4
steps = 10000
record_stride = 100
)"},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_table()) names.push_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  const auto it = preset_table().find(name);
  if (it == preset_table().end()) {
    throw ConfigError(fmt::format("unknown preset '{}' (available: {})", name,
                                  fmt::join(preset_names(), ", ")));
  }
  return it->second;
}

ScenarioConfig preset(const std::string& name) { return parse_config(preset_text(name)); }

}  // namespace sng
