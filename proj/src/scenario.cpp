#include "sng/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/Core>
#include <fftw3.h>
#include <fmt/format.h>

#include "sng/error.hpp"
#include "sng/propagator.hpp"

#ifndef SNG_VERSION
#define SNG_VERSION "unknown"
#endif

namespace sng {

std::string code_version() { return SNG_VERSION; }

std::vector<std::string> timeseries_columns() {
  std::vector<std::string> cols{"time"};
  for (const auto& l : kModeLabels) {
    for (const char* q : {"norm", "center", "width"}) cols.push_back(fmt::format("{}_{}", q, l.str()));
  }
  for (const char* c : {"gram_drift", "cross_block", "phi_min", "energy", "entropy", "negativity"}) {
    cols.emplace_back(c);
  }
  return cols;
}

void write_csv_header(std::ostream& out) {
  const auto cols = timeseries_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, const TimeSeriesRow& r) {
  // 17 significant digits round-trip doubles exactly
  auto num = [](double v) { return fmt::format("{:.17g}", v); };
  std::string line = num(r.time);
  for (int a = 0; a < 4; ++a) {
    line += "," + num(r.norm[a]) + "," + num(r.center[a]) + "," + num(r.width[a]);
  }
  line += "," + num(r.gram_drift) + "," + num(r.cross_block) + "," + num(r.phi_min) + "," +
          num(r.energy);
  line += "," + (r.entropy ? num(*r.entropy) : std::string());
  line += "," + (r.negativity ? num(*r.negativity) : std::string());
  out << line << '\n';
}

namespace {

ModeSet build_modes(const ScenarioConfig& c, const std::shared_ptr<const Grid>& grid) {
  ModeSet m;
  for (int a = 0; a < 4; ++a) {
    const auto& p = c.packets[a];
    m.packets[a] =
        gaussian_packet(grid, p.center, p.width, p.momentum, kModeLabels[a], c.support_sigmas);
  }
  return m;
}

double max_abs_entry(const GramMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TimeSeriesRow common_row(const StepRecord& rec) {
  TimeSeriesRow row;
  row.time = rec.time;
  for (int a = 0; a < 4; ++a) {
    row.norm[a] = rec.observables[a].norm;
    row.center[a] = rec.observables[a].mean_position[0];
    row.width[a] = rec.observables[a].rms_width;
  }
  row.cross_block = cross_block_diagnostic(rec.mode_gram);
  row.phi_min = rec.phi_min;
  row.energy = rec.energy;
  return row;
}

class Analyzer {
 public:
  Analyzer(const ScenarioConfig& c, const RowObserver& observer)
      : config_(c), observer_(observer) {}

  void on_modes(const StepRecord& rec, const ModeSet&) {
    if (!g0_) g0_ = rec.mode_gram;
    TimeSeriesRow row = common_row(rec);
    row.gram_drift = max_abs_entry(rec.mode_gram - *g0_);
    if (due()) {
      const auto rep = semiclassical_entanglement(rec.mode_gram, config_.physics.boson_number,
                                                  config_.cross_block_threshold);
      row.entropy = rep.entropy_bits;
      row.negativity = rep.log_negativity_bits;
      row.certified = rep.certified;
    } else {
      row.certified = row.cross_block <= config_.cross_block_threshold;
    }
    push(std::move(row));
  }

  void on_branches(const StepRecord& rec, const BranchSet& branches) {
    const auto& grams = *rec.branch_grams;
    if (!b0_) b0_ = grams;
    TimeSeriesRow row = common_row(rec);
    row.gram_drift = std::max(max_abs_entry(grams[0] - (*b0_)[0]),
                              max_abs_entry(grams[1] - (*b0_)[1]));
    row.certified = row.cross_block <= config_.cross_block_threshold;
    if (due()) {
      Eigen::Vector4cd amplitudes;
      for (int b = 0; b < 4; ++b) {
        amplitudes[b] = std::polar(0.5, branches.branches[b].interaction_phase);
      }
      const auto rep =
          branch_entanglement(grams[0], grams[1], config_.physics.boson_number, amplitudes);
      row.entropy = rep.entropy_bits;
      row.negativity = rep.log_negativity_bits;
    }
    push(std::move(row));
  }

  std::vector<TimeSeriesRow> rows;

 private:
  bool due() const { return rows.size() % config_.entanglement_stride == 0; }

  void push(TimeSeriesRow row) {
    if (observer_) observer_(row);
    rows.push_back(std::move(row));
  }

  const ScenarioConfig& config_;
  const RowObserver& observer_;
  std::optional<GramMatrix> g0_;
  std::optional<std::array<GramMatrix, 2>> b0_;
};

RunSummary summarize(const std::vector<TimeSeriesRow>& rows) {
  RunSummary s;
  const double e0 = rows.front().energy;
  bool certified = true;
  for (const auto& r : rows) {
    if (r.entropy) s.max_entropy = std::max(s.max_entropy, *r.entropy);
    if (r.negativity) s.max_negativity = std::max(s.max_negativity, *r.negativity);
    s.max_gram_drift = std::max(s.max_gram_drift, r.gram_drift);
    s.max_cross_block = std::max(s.max_cross_block, r.cross_block);
    const double de = std::abs(r.energy - e0);
    s.energy_drift = std::max(s.energy_drift, e0 != 0.0 ? de / std::abs(e0) : de);
    s.min_phi = std::min(s.min_phi, r.phi_min);
    certified = certified && r.certified;
  }
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->entropy) {
      s.final_entropy = *it->entropy;
      s.final_negativity = *it->negativity;
      break;
    }
  }
  if (!certified) {
    s.verdict = "uncertified";
  } else {
    s.verdict = s.max_entropy < 1e-9 ? "unentangled" : "entangled";
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

std::string format_manifest(const ScenarioConfig& config) {
  ScenarioConfig resolved = config;
  const bool defaulted_softening = !config.softening.has_value();
  resolved.softening = config.resolved_physics().softening;
  const KernelScheme kernel =
      config.grid.dimension == 1 ? KernelScheme::kPointSampled
      : config.kernel == KernelScheme::kAuto ? KernelScheme::kTruncatedSpectral
                                             : config.kernel;

  std::string out;
  out += "# sngrav run manifest\n";
  out += fmt::format("# code_version: {}\n", code_version());
  out += fmt::format("# fftw: {}\n", fftw_version);
  out += fmt::format("# eigen: {}.{}.{}\n", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                     EIGEN_MINOR_VERSION);
  out += fmt::format("# fmt: {}\n", FMT_VERSION);
  out += fmt::format("# grid_spacing: {}\n", config.grid.spacing());
  out += fmt::format("# softening: {}{}\n", *resolved.softening,
                     defaulted_softening ? " (default: smallest packet width)" : "");
  out += fmt::format("# kernel: {}\n", config.grid.dimension == 1
                                            ? std::string("softened -G/sqrt(x^2+a^2)")
                                            : to_string(kernel));
  if (config.sourcing == SourcingMode::kMeanField) {
    out += fmt::format("# source weight per packet: {} (N/2)\n", 0.5 * config.physics.boson_number);
  } else if (config.sourcing == SourcingMode::kBranchResolved) {
    out += fmt::format("# source weight per packet: {} (N, per branch)\n",
                       config.physics.boson_number);
  }
  out += "\n";
  out += format_config(resolved);
  return out;
}

std::string format_summary(const ScenarioConfig& config, const RunSummary& s) {
  std::string out;
  auto line = [&out](std::string_view k, const std::string& v) {
    out += fmt::format("{} = {}\n", k, v);
  };
  auto num = [](double v) { return fmt::format("{:.6e}", v); };
  line("scenario", config.name);
  line("sourcing", to_string(config.sourcing));
  line("verdict", s.verdict);
  line("max_entropy_bits", num(s.max_entropy));
  line("max_negativity_bits", num(s.max_negativity));
  line("final_entropy_bits", num(s.final_entropy));
  line("final_negativity_bits", num(s.final_negativity));
  line("max_gram_drift", num(s.max_gram_drift));
  line("max_cross_block", num(s.max_cross_block));
  line("energy_drift", num(s.energy_drift));
  line("min_phi", num(s.min_phi));
  line("wall_seconds", fmt::format("{:.3f}", s.wall_seconds));
  return out;
}

RunResult run_scenario(const ScenarioConfig& config, const RowObserver& observer) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  std::filesystem::path dir;
  std::ofstream csv;
  if (!config.output_directory.empty()) {
    dir = config.output_directory;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                ec.message()));
    }
    write_file(dir / "manifest.txt", format_manifest(config));
    csv.open(dir / "timeseries.csv", std::ios::binary);
    if (!csv) throw IoError(fmt::format("cannot open '{}'", (dir / "timeseries.csv").string()));
    write_csv_header(csv);
  }

  RowObserver sink = [&](const TimeSeriesRow& row) {
    if (csv.is_open()) write_csv_row(csv, row);
    if (observer) observer(row);
  };

  auto grid = build_grid(config.grid);
  ModeSet modes = build_modes(config, grid);
  Propagator propagator(grid, config.resolved_physics(), config.schedule.dt, config.sourcing,
                        config.propagator_options());
  Analyzer analyzer(config, sink);
  if (config.sourcing == SourcingMode::kBranchResolved) {
    BranchSet branches = make_branches(modes);
    evolve(branches, propagator, config.schedule,
           [&](const StepRecord& r, const BranchSet& b) { analyzer.on_branches(r, b); });
  } else {
    evolve(modes, propagator, config.schedule,
           [&](const StepRecord& r, const ModeSet& m) { analyzer.on_modes(r, m); });
  }

  RunResult result;
  result.rows = std::move(analyzer.rows);
  result.summary = summarize(result.rows);
  result.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (csv.is_open()) {
    csv.close();
    if (!csv) throw IoError("failed writing timeseries.csv");
    write_file(dir / "summary.txt", format_summary(config, result.summary));
  }
  return result;
}

}  // namespace sng
