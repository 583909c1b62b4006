// sngrav: run, verify and inspect Schrödinger–Newton two-subsystem scenarios.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sng/config.hpp"
#include "sng/error.hpp"
#include "sng/scenario.hpp"
#include "sng/verify.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3, kVerifyFailed = 4 };

struct Selection {
  std::string preset;
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_selection(CLI::App* cmd, Selection& sel) {
  auto* p = cmd->add_option("--preset", sel.preset, "Bundled scenario")
                ->check(CLI::IsMember(sng::preset_names()));
  auto* c = cmd->add_option("--config", sel.config_path, "Scenario file")->check(CLI::ExistingFile);
  p->excludes(c);
  cmd->add_option("--override", sel.overrides, "section.key=value, repeatable")
      ->allow_extra_args(false);
}

sng::ScenarioConfig resolve(const Selection& sel, const std::string& fallback) {
  sng::ScenarioConfig config;
  if (!sel.config_path.empty()) {
    config = sng::load_config(sel.config_path);
  } else {
    config = sng::preset(sel.preset.empty() ? fallback : sel.preset);
  }
  for (const auto& o : sel.overrides) sng::apply_override(config, o);
  sng::validate(config);
  return config;
}

int run_verb(const Selection& sel, const std::string& output, bool verbose) {
  auto config = resolve(sel, "paper-1d");
  if (!output.empty()) config.output_directory = output;
  if (config.output_directory.empty()) config.output_directory = "runs/" + config.name;

  std::size_t count = 0;
  auto observer = [&](const sng::TimeSeriesRow& r) {
    ++count;
    if (!verbose) return;
    std::fprintf(stderr, "t=%-10.4g gram_drift=%.2e phi_min=%.4e entropy=%s\n", r.time,
                 r.gram_drift, r.phi_min,
                 r.entropy ? fmt::format("{:.3e}", *r.entropy).c_str() : "-");
  };
  const auto result = sng::run_scenario(config, observer);
  std::cout << sng::format_summary(config, result.summary);
  std::cout << fmt::format("records = {}\noutput = {}\n", count, config.output_directory);
  return kOk;
}

int verify_verb(const Selection& sel, bool fault) {
  std::vector<sng::ScenarioConfig> configs;
  if (sel.preset.empty() && sel.config_path.empty()) {
    for (const char* name : {"paper-1d", "paper-3d"}) {
      Selection s = sel;
      s.preset = name;
      configs.push_back(resolve(s, name));
    }
  } else {
    configs.push_back(resolve(sel, "paper-1d"));
  }
  bool ok = true;
  for (const auto& c : configs) {
    const auto report = sng::verify(c, sng::VerifyOptions{fault});
    std::cout << sng::format_report(report);
    ok = ok && report.passed();
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrödinger–Newton two-subsystem entanglement simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sng::code_version());

  Selection run_sel, verify_sel, print_sel;
  std::string output;
  bool verbose = false;
  bool fault = false;

  auto* run = app.add_subcommand("run", "Evolve a scenario and write manifest, time series and summary");
  add_selection(run, run_sel);
  run->add_option("--output", output, "Output directory (default: [output] directory, else runs/<name>)");
  run->add_flag("-v,--verbose", verbose, "Print every record to stderr");

  auto* ver = app.add_subcommand("verify", "Run the oracle battery (both 1D and 3D presets by default)");
  add_selection(ver, verify_sel);
  ver->add_flag("--inject-kernel-fault", fault, "Perturb the gravity kernel by 0.1%");

  auto* print = app.add_subcommand("print-config", "Print the resolved configuration");
  add_selection(print, print_sel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return run_verb(run_sel, output, verbose);
    if (*ver) return verify_verb(verify_sel, fault);
    if (*print) {
      std::cout << sng::format_config(resolve(print_sel, "paper-1d"));
      return kOk;
    }
  } catch (const sng::StepSizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const sng::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const sng::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const sng::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const sng::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const sng::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const sng::Error& e) {
    // degeneracy, degenerate or indefinite inputs surfaced during analysis
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
