#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sng/config.hpp"
#include "sng/entanglement.hpp"

namespace sng {

/// One recorded step.  Entropy and negativity are empty on rows skipped by
/// the entanglement stride.
struct TimeSeriesRow {
  double time = 0.0;
  std::array<double, 4> norm{};
  /// Axis-0 mean position.
  std::array<double, 4> center{};
  std::array<double, 4> width{};
  double gram_drift = 0.0;
  double cross_block = 0.0;
  double phi_min = 0.0;
  double energy = 0.0;
  std::optional<double> entropy;
  std::optional<double> negativity;
  bool certified = true;
};

/// Fixed CSV column order.
std::vector<std::string> timeseries_columns();
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const TimeSeriesRow& row);

struct RunSummary {
  /// "unentangled", "entangled", or "uncertified" when the cross-block
  /// overlap exceeded the threshold at some record.
  std::string verdict;
  double max_entropy = 0.0;
  double max_negativity = 0.0;
  double final_entropy = 0.0;
  double final_negativity = 0.0;
  double max_gram_drift = 0.0;
  double max_cross_block = 0.0;
  /// max_t |E(t) - E(0)| / |E(0)|; absolute when E(0) = 0.
  double energy_drift = 0.0;
  double min_phi = 0.0;
  double wall_seconds = 0.0;
};

struct RunResult {
  std::vector<TimeSeriesRow> rows;
  RunSummary summary;
};

/// Called after each recorded row (for progress output).
using RowObserver = std::function<void(const TimeSeriesRow&)>;

/// Validates, evolves and analyses.  Writes manifest.txt, timeseries.csv and
/// summary.txt when config.output_directory is non-empty (IoError on failure).
RunResult run_scenario(const ScenarioConfig& config, const RowObserver& observer = {});

/// Manifest text: code and library versions, then the resolved configuration.
std::string format_manifest(const ScenarioConfig& config);
std::string format_summary(const ScenarioConfig& config, const RunSummary& summary);

std::string code_version();

}  // namespace sng
