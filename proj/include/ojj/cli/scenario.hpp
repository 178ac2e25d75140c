#pragma once

// Scenario runners behind the `ojj` subcommands.
//
// Parameters per kind (defaults in parentheses):
//   protocol      N; phi_values | phi_start (0), phi_stop (pi), phi_count (50);
//                 pulse_g (1); pulse_kappa (0)
//   interference  N; phi (pi/4); pulse_g (1); kappa (1); tau_count (2000);
//                 tau_max (1.2 pi/kappa); prefactor (1); threshold_fraction (1/e)
//   ring          gamma_prime_1; gamma_prime_2 (= gamma_prime_1); omega_k1;
//                 omega_k2 (= omega_k1); theta (0); n_particles (1);
//                 ring_cutoff (2); kappa (0); duration (4 periods of 2 pi/g);
//                 grid_points (4000)
//   bragg         omega_pump; omega_probe (= omega_pump); detuning; omega_k;
//                 order (1); nu (4 omega_k); scan_variable ("nu" | "detuning");
//                 scan_values | scan_start, scan_stop, scan_count (41);
//                 pulse_time (one transfer time); parallel (true)
//   sweep         scenario; parameter; values; base (object); parallel (true)
//   selftest      inject_fault ("none" | "non_hermitian")

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ojj/cli/config.hpp"
#include "ojj/cli/result_table.hpp"
#include "ojj/cli/svg_plot.hpp"

namespace ojj::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr double kNormDriftTolerance = 1e-9;
inline constexpr double kHermiticityTolerance = 1e-12;

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIntegrity = 2 };

struct IntegrityStats {
  double max_norm_drift = 0.0;
  double max_hermiticity_residual = 0.0;

  void merge(const IntegrityStats& other);
  bool ok() const;
};

struct NamedTable {
  std::string file;
  ResultTable table;
};

struct NamedPlot {
  std::string file;
  LinePlot plot;
};

struct ScenarioOutput {
  json parameters = json::object();  // resolved, defaults filled in
  json results = json::object();
  std::vector<std::pair<std::string, double>> metrics;  // fixed order per kind
  IntegrityStats integrity;
  std::vector<NamedTable> tables;
  std::vector<NamedPlot> plots;
  std::vector<std::string> failures;  // non-empty makes the run exit 2
};

struct RunContext {
  std::string prefix = "parameters";
  bool allow_parallel = true;
};

ScenarioOutput run_protocol_scenario(const json& params, const RunContext& ctx = {});
ScenarioOutput run_interference_scenario(const json& params, const RunContext& ctx = {});
ScenarioOutput run_ring_scenario(const json& params, const RunContext& ctx = {});
ScenarioOutput run_bragg_scenario(const json& params, const RunContext& ctx = {});
ScenarioOutput run_sweep_scenario(const json& params, const RunContext& ctx = {});
ScenarioOutput run_selftest_scenario(const json& params, const RunContext& ctx = {});

ScenarioOutput run_kind(ScenarioKind kind, const json& params, const RunContext& ctx = {});

/// Scalar parameters a sweep may vary for the given inner scenario.
const std::vector<std::string>& sweepable_parameters(ScenarioKind kind);

struct RunOptions {
  std::optional<std::string> config_path;  // optional for selftest only
  std::optional<std::string> out_dir;      // overrides the config's output_dir
  bool emit_plots = false;                 // or-ed with the config flag
};

/// Full run: load config, execute, write CSV/JSON/SVG. Messages go to `log`
/// and `err`. Returns an ExitCode.
int run_scenario(ScenarioKind kind, const RunOptions& options, std::ostream& log,
                 std::ostream& err);

}  // namespace ojj::cli
