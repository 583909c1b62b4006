#pragma once

#include <string>
#include <vector>

#include "sng/config.hpp"

namespace sng {

struct VerifyItem {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string scenario;
  int dimension = 1;
  std::vector<VerifyItem> items;

  bool passed() const;
};

struct VerifyOptions {
  /// Scales the gravity kernel spectrum by 1.001 before the potential check.
  bool inject_kernel_fault = false;
};

/// Oracle battery on the configuration's grid: Gaussian potential, free
/// spreading, 2x2 Löwdin, N-boson overlaps, dense Fock equivalence and
/// branch entanglement.  Failures are report entries, not exceptions.
VerifyReport verify(const ScenarioConfig& config, const VerifyOptions& options = {});

std::string format_report(const VerifyReport& report);

}  // namespace sng
