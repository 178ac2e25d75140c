#include "ojj/cli/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ojj/bragg.hpp"
#include "ojj/cli/selftest.hpp"
#include "ojj/fock.hpp"
#include "ojj/interference.hpp"
#include "ojj/parallel.hpp"
#include "ojj/protocol.hpp"
#include "ojj/ring.hpp"

namespace ojj::cli {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double opt_or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

void add_metric(ScenarioOutput& out, const std::string& name, double value) {
  out.metrics.emplace_back(name, value);
  out.results[name] = json_number(value);
}

std::vector<double> grid_or_values(ParamReader& r, const std::string& values_key,
                                   const std::string& start_key, double start_default,
                                   const std::string& stop_key, double stop_default,
                                   const std::string& count_key, int count_default) {
  if (r.has(values_key)) {
    for (const auto& k : {start_key, stop_key, count_key}) {
      if (r.has(k)) throw ConfigError(k, "cannot be combined with '" + values_key + "'");
    }
    auto v = r.numbers(values_key);
    if (v.empty()) throw ConfigError(values_key, "must not be empty");
    return v;
  }
  const double start = r.number(start_key, start_default);
  const double stop = r.number(stop_key, stop_default);
  const int count = r.integer(count_key, count_default);
  if (count < 1) throw ConfigError(count_key, "must be >= 1");
  return linspace(start, stop, count);
}

json numbers_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(json_number(x));
  return out;
}

int even_atom_number(ParamReader& r) {
  const int n = r.integer("N");
  if (n < 2 || n % 2 != 0) throw ConfigError("N", "must be an even integer >= 2");
  return n;
}

}  // namespace

void IntegrityStats::merge(const IntegrityStats& other) {
  max_norm_drift = std::max(max_norm_drift, other.max_norm_drift);
  max_hermiticity_residual = std::max(max_hermiticity_residual, other.max_hermiticity_residual);
}

bool IntegrityStats::ok() const {
  return max_norm_drift <= kNormDriftTolerance &&
         max_hermiticity_residual <= kHermiticityTolerance;
}

ScenarioOutput run_protocol_scenario(const json& params, const RunContext& ctx) {
  ParamReader r(params, ctx.prefix);
  const int n = even_atom_number(r);
  const auto phis = grid_or_values(r, "phi_values", "phi_start", 0.0, "phi_stop", kPi,
                                   "phi_count", 50);
  const double g = r.number("pulse_g", 1.0);
  const double kappa = r.number("pulse_kappa", 0.0);
  r.finish();
  if (!(g > 0.0)) throw ConfigError("pulse_g", "must be > 0");

  ScenarioOutput out;
  out.parameters = {{"N", n}, {"phi_values", numbers_json(phis)}, {"pulse_g", json_number(g)},
                    {"pulse_kappa", json_number(kappa)}};

  out.integrity.max_hermiticity_residual =
      build_two_mode_hamiltonian({.total_atoms = n, .kappa = kappa, .g = g, .theta = kPi})
          .residual();

  ResultTable table;
  table.columns = {"phi", "delta_n_sim", "delta_n_eq22", "delta_n_exact"};
  double max_sim = 0.0, max_sim_gap = 0.0, max_rel_gap = kNaN, max_d_mismatch = 0.0;
  bool d_all_match = true;
  json diagnostics = json::array();
  for (double phi : phis) {
    const auto res = run_protocol(n, single_pulse(phi, g, kappa));
    out.integrity.max_norm_drift =
        std::max(out.integrity.max_norm_drift, std::abs(res.final_state.norm() - 1.0));
    table.add_row({phi, res.delta_n_simulated, res.delta_n_large_n, res.delta_n_exact});
    max_sim = std::max(max_sim, res.delta_n_simulated);
    max_sim_gap = std::max(max_sim_gap, std::abs(res.delta_n_simulated - res.delta_n_exact));
    if (std::abs(std::sin(phi)) > 0.1) {
      const double rel = std::abs(res.delta_n_large_n - res.delta_n_simulated) / res.delta_n_simulated;
      max_rel_gap = std::isnan(max_rel_gap) ? rel : std::max(max_rel_gap, rel);
    }
    const auto d = d_coefficients(n, phi);
    max_d_mismatch = std::max(max_d_mismatch, d.max_modulus_mismatch);
    if (!d.matches_oracle) {
      d_all_match = false;
      diagnostics.push_back(d.diagnostic);
    }
  }

  add_metric(out, "max_delta_n_sim", max_sim);
  add_metric(out, "max_abs_sim_minus_exact", max_sim_gap);
  add_metric(out, "max_rel_gap_eq22", max_rel_gap);
  add_metric(out, "slope_at_zero", delta_n_slope_at_zero(n));
  add_metric(out, "d_max_modulus_mismatch", max_d_mismatch);
  out.results["slope_expected"] = json_number(std::sqrt(n * (n + 2.0) / 8.0));
  out.results["rel_gap_bound"] = json_number(1.0 / n);
  out.results["d_coefficients_match_oracle"] = d_all_match;
  out.results["d_coefficient_diagnostics"] = diagnostics;

  out.plots.push_back({"protocol.svg",
                       {"Number spread after the pulse", "phi", "delta n",
                        table.column(0),
                        {{"simulated", table.column(1)}, {"large-N form", table.column(2)}}}});
  out.tables.push_back({"protocol.csv", std::move(table)});
  return out;
}

ScenarioOutput run_interference_scenario(const json& params, const RunContext& ctx) {
  ParamReader r(params, ctx.prefix);
  const int n = even_atom_number(r);
  const double phi = r.number("phi", kPi / 4.0);
  const double pulse_g = r.number("pulse_g", 1.0);
  const double pulse_kappa = r.number("pulse_kappa", 0.0);
  const double kappa = r.number("kappa", 1.0);
  const int tau_count = r.integer("tau_count", 2000);
  const bool has_tau_max = r.has("tau_max");
  const double tau_max = r.number("tau_max", kappa != 0.0 ? 1.2 * kPi / std::abs(kappa) : 0.0);
  const double prefactor = r.number("prefactor", 1.0);
  const double fraction = r.number("threshold_fraction", kDefaultCollapseFraction);
  r.finish();
  if (!(pulse_g > 0.0)) throw ConfigError("pulse_g", "must be > 0");
  if (kappa < 0.0) throw ConfigError("kappa", "must be >= 0");
  if (kappa == 0.0 && !has_tau_max) throw ConfigError("tau_max", "required when kappa is 0");
  if (!(tau_max > 0.0)) throw ConfigError("tau_max", "must be > 0");
  if (tau_count < 2) throw ConfigError("tau_count", "must be >= 2");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("threshold_fraction", "must lie in (0, 1)");
  }

  ScenarioOutput out;
  out.parameters = {{"N", n},
                    {"phi", json_number(phi)},
                    {"pulse_g", json_number(pulse_g)},
                    {"pulse_kappa", json_number(pulse_kappa)},
                    {"kappa", json_number(kappa)},
                    {"tau_count", tau_count},
                    {"tau_max", json_number(tau_max)},
                    {"prefactor", json_number(prefactor)},
                    {"threshold_fraction", json_number(fraction)}};

  ComplexVector amplitudes;
  if (pulse_kappa == 0.0) {
    const auto d = d_coefficients(n, phi);
    amplitudes = d.trusted_amplitudes();
    out.results["amplitude_source"] = d.matches_oracle ? "closed_form" : "oracle";
    out.results["d_coefficient_diagnostic"] = d.diagnostic;
  } else {
    amplitudes = run_protocol(n, single_pulse(phi, pulse_g, pulse_kappa)).final_state.amplitudes();
    out.results["amplitude_source"] = "simulation";
    out.results["d_coefficient_diagnostic"] = "";
  }
  const FockStateVector state(n, amplitudes);
  out.integrity.max_norm_drift = std::abs(state.norm() - 1.0);
  out.integrity.max_hermiticity_residual = hermiticity_residual(build_angular_ops(n).jx);

  const auto grid = linspace(0.0, tau_max, tau_count);
  const auto trace = intensity_trace(state, kappa, grid, prefactor);
  const double dn = number_statistics(state).delta_n;

  double closed_gap = 0.0, max_abs = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double closed = prefactor * intensity_closed_form(amplitudes, n, kappa, grid[k]);
    closed_gap = std::max(closed_gap, std::abs(closed - trace.intensity[k]));
    max_abs = std::max(max_abs, std::abs(trace.intensity[k]));
  }

  CollapseReport report;
  if (kappa > 0.0) {
    try {
      report = detect_collapse_revival(trace, fraction, dn > 0.0 ? std::optional(dn) : std::nullopt);
    } catch (const PreconditionError& e) {
      throw ConfigError("tau_max", e.what());
    }
  }
  add_metric(out, "delta_n", dn);
  add_metric(out, "t_coll_estimate", opt_or_nan(report.t_coll_estimate));
  add_metric(out, "t_coll_measured", opt_or_nan(report.t_coll_measured));
  add_metric(out, "t_revival_measured", opt_or_nan(report.t_revival_measured));
  add_metric(out, "envelope_peak", report.envelope_peak);
  add_metric(out, "max_abs_intensity", max_abs);
  add_metric(out, "closed_form_max_gap", closed_gap);
  out.results["envelope_threshold"] = json_number(report.envelope_threshold);
  out.results["signal_resolved"] = report.signal_resolved;
  out.results["max_imaginary_residue"] = json_number(trace.max_imaginary_residue);

  ResultTable table;
  table.columns = {"tau", "intensity"};
  for (std::size_t k = 0; k < grid.size(); ++k) table.add_row({grid[k], trace.intensity[k]});
  out.plots.push_back({"interference.svg",
                       {"Interference intensity", "tau", "I", grid, {{"I", trace.intensity}}}});
  out.tables.push_back({"interference.csv", std::move(table)});
  return out;
}

ScenarioOutput run_ring_scenario(const json& params, const RunContext& ctx) {
  ParamReader r(params, ctx.prefix);
  RingCouplingModel model;
  model.gamma_prime_1 = r.number("gamma_prime_1");
  model.gamma_prime_2 = r.number("gamma_prime_2", model.gamma_prime_1);
  model.omega_k1 = r.number("omega_k1");
  model.omega_k2 = r.number("omega_k2", model.omega_k1);
  model.theta = r.number("theta", 0.0);
  model.n_particles = r.integer("n_particles", 1);
  model.ring_cutoff = r.integer("ring_cutoff", 2);
  model.kappa = r.number("kappa", 0.0);
  const bool has_duration = r.has("duration");
  const double duration = has_duration ? r.number("duration") : 0.0;
  const int grid_points = r.integer("grid_points", kAdiabaticGridPoints);
  r.finish();
  if (!(model.omega_k1 > 0.0)) throw ConfigError("omega_k1", "must be > 0");
  if (!(model.omega_k2 > 0.0)) throw ConfigError("omega_k2", "must be > 0");
  if (model.n_particles < 1) throw ConfigError("n_particles", "must be >= 1");
  if (model.ring_cutoff < 1) throw ConfigError("ring_cutoff", "must be >= 1");
  if (grid_points < 2) throw ConfigError("grid_points", "must be >= 2");

  const double g = effective_coupling_g(model);
  double t_end = duration;
  if (!has_duration) {
    if (!(g > 0.0)) throw ConfigError("duration", "required when the effective coupling is zero");
    t_end = default_adiabatic_duration(model);
  }
  if (!(t_end > 0.0)) throw ConfigError("duration", "must be > 0");

  ScenarioOutput out;
  out.parameters = {{"gamma_prime_1", json_number(model.gamma_prime_1)},
                    {"gamma_prime_2", json_number(model.gamma_prime_2)},
                    {"omega_k1", json_number(model.omega_k1)},
                    {"omega_k2", json_number(model.omega_k2)},
                    {"theta", json_number(model.theta)},
                    {"n_particles", model.n_particles},
                    {"ring_cutoff", model.ring_cutoff},
                    {"kappa", json_number(model.kappa)},
                    {"duration", json_number(t_end)},
                    {"grid_points", grid_points}};

  out.integrity.max_hermiticity_residual = build_ring_hamiltonian(model).residual();
  const auto times = linspace(0.0, t_end, grid_points);
  const auto trace = ring_population_trace(model, times);
  out.integrity.max_norm_drift = trace.max_norm_drift;
  if (trace.max_number_drift > kNormDriftTolerance) {
    out.failures.push_back("total particle number drifted by " +
                           format_number(trace.max_number_drift));
  }

  const double np = model.n_particles;
  ResultTable table;
  table.columns = {"t", "p_trap1", "p_trap2", "p_ring"};
  double max_ring = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& occ = trace.occupation[k];
    const double ring = (occ[2] + occ[3]) / np;
    max_ring = std::max(max_ring, ring);
    table.add_row({times[k], occ[0] / np, occ[1] / np, ring});
  }

  double fitted = kNaN, rel = kNaN;
  if (model.n_particles == 1) {
    try {
      const auto report = validate_adiabatic(model, t_end, grid_points);
      fitted = report.fitted_rabi_frequency;
      rel = report.relative_error;
      out.results["fit_error"] = "";
    } catch (const FitError& e) {
      out.results["fit_error"] = e.what();
    }
  } else {
    out.results["fit_error"] = "frequency fit needs n_particles = 1";
  }
  add_metric(out, "effective_g", g);
  add_metric(out, "fitted_rabi_frequency", fitted);
  add_metric(out, "relative_error", rel);
  add_metric(out, "max_ring_population", max_ring);
  add_metric(out, "epsilon", model.epsilon());
  add_metric(out, "max_number_drift", trace.max_number_drift);

  out.plots.push_back({"ring.svg",
                       {"Trap and ring populations", "t", "fraction", table.column(0),
                        {{"trap 1", table.column(1)},
                         {"trap 2", table.column(2)},
                         {"ring", table.column(3)}}}});
  out.tables.push_back({"ring.csv", std::move(table)});
  return out;
}

ScenarioOutput run_bragg_scenario(const json& params, const RunContext& ctx) {
  ParamReader r(params, ctx.prefix);
  BraggLadderParams p;
  p.omega_pump = r.number("omega_pump");
  p.omega_probe = r.number("omega_probe", p.omega_pump);
  p.detuning = r.number("detuning");
  p.omega_k = r.number("omega_k");
  p.order = r.integer("order", 1);
  p.nu = r.number("nu", 4.0 * p.omega_k);
  const std::string variable_name = r.string("scan_variable", "nu");
  if (variable_name != "nu" && variable_name != "detuning") {
    throw ConfigError("scan_variable", "must be \"nu\" or \"detuning\"");
  }
  const auto variable = variable_name == "nu" ? BraggScanVariable::kNu : BraggScanVariable::kDetuning;
  if (!(p.omega_k > 0.0)) throw ConfigError("omega_k", "must be > 0");
  if (p.order < 1) throw ConfigError("order", "must be >= 1");
  if (p.omega_pump == 0.0 || p.omega_probe == 0.0) {
    throw ConfigError(p.omega_pump == 0.0 ? "omega_pump" : "omega_probe", "must be nonzero");
  }
  if (p.delta_1() == 0.0) throw ConfigError("detuning", "detuning + omega_k must be nonzero");

  const double rabi = std::abs(p.omega_pump * p.omega_probe / p.delta_1());
  double start = 0.0, stop = 0.0;
  if (variable == BraggScanVariable::kNu) {
    start = 4.0 * p.omega_k - 4.0 * rabi;
    stop = 4.0 * p.omega_k + 4.0 * rabi;
  } else {
    start = 0.5 * p.detuning;
    stop = 2.0 * p.detuning;
  }
  if (variable == BraggScanVariable::kDetuning && p.detuning == 0.0 && !r.has("scan_values") &&
      !(r.has("scan_start") && r.has("scan_stop"))) {
    throw ConfigError("scan_values", "no default detuning range when detuning is 0");
  }
  const auto values = grid_or_values(r, "scan_values", "scan_start", start, "scan_stop", stop,
                                     "scan_count", 41);
  const double pulse_time = r.number("pulse_time", transfer_time(p));
  const bool parallel = r.boolean("parallel", true);
  r.finish();
  if (!(pulse_time >= 0.0)) throw ConfigError("pulse_time", "must be >= 0");

  ScenarioOutput out;
  out.parameters = {{"omega_pump", json_number(p.omega_pump)},
                    {"omega_probe", json_number(p.omega_probe)},
                    {"detuning", json_number(p.detuning)},
                    {"omega_k", json_number(p.omega_k)},
                    {"order", p.order},
                    {"nu", json_number(p.nu)},
                    {"scan_variable", variable_name},
                    {"scan_values", numbers_json(values)},
                    {"pulse_time", json_number(pulse_time)},
                    {"parallel", parallel}};

  out.integrity.max_hermiticity_residual = hermiticity_residual(first_order_generator(p));
  const auto scan = bragg_scan(p, variable, values, pulse_time, parallel && ctx.allow_parallel);

  ResultTable table;
  table.columns = {variable == BraggScanVariable::kNu ? "nu" : "delta", "transfer_probability",
                   "gamma_eff"};
  std::size_t best = 0;
  for (std::size_t k = 0; k < scan.size(); ++k) {
    table.add_row({scan[k].value, scan[k].transfer_probability, scan[k].gamma_eff});
    out.integrity.max_norm_drift = std::max(out.integrity.max_norm_drift, scan[k].norm_drift);
    if (scan[k].transfer_probability > scan[best].transfer_probability) best = k;
  }

  // Full ladder against the eliminated two-level model at the base point.
  const auto grid = linspace(0.0, pulse_time, 201);
  const auto full = first_order_dynamics(p, grid);
  const auto reduced = reduced_two_level_dynamics(p, grid);
  double gap = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    gap = std::max(gap, std::abs(std::norm(full[k].g2k) - std::norm(reduced[k].g2k)));
    out.integrity.max_norm_drift =
        std::max(out.integrity.max_norm_drift, std::abs(full[k].norm_squared() - 1.0));
  }

  add_metric(out, "best_value", scan[best].value);
  add_metric(out, "max_transfer", scan[best].transfer_probability);
  add_metric(out, "two_photon_detuning", resonance_detuning(p));
  add_metric(out, "gamma_eff", p.detuning != 0.0 ? effective_gamma(p) : kNaN);
  add_metric(out, "transfer_time", transfer_time(p));
  add_metric(out, "full_vs_reduced_max_gap", gap);
  out.results["adiabatic"] = p.adiabatic();
  out.results["delta_1"] = json_number(p.delta_1());

  out.plots.push_back({"bragg.svg",
                       {"Transfer to 2k", table.columns[0], "P(2k)", table.column(0),
                        {{"transfer", table.column(1)}}}});
  out.tables.push_back({"bragg.csv", std::move(table)});
  return out;
}

const std::vector<std::string>& sweepable_parameters(ScenarioKind kind) {
  static const std::vector<std::string> protocol{"N", "phi_start", "phi_stop", "phi_count",
                                                 "pulse_g", "pulse_kappa"};
  static const std::vector<std::string> interference{
      "N", "phi", "pulse_g", "pulse_kappa", "kappa", "tau_count", "tau_max", "prefactor",
      "threshold_fraction"};
  static const std::vector<std::string> ring{
      "gamma_prime_1", "gamma_prime_2", "omega_k1", "omega_k2",  "theta",
      "n_particles",   "ring_cutoff",   "kappa",    "duration", "grid_points"};
  static const std::vector<std::string> bragg{"omega_pump", "omega_probe", "detuning",
                                              "omega_k",    "order",       "nu",
                                              "scan_start", "scan_stop",   "scan_count",
                                              "pulse_time"};
  static const std::vector<std::string> none;
  switch (kind) {
    case ScenarioKind::kProtocol: return protocol;
    case ScenarioKind::kInterference: return interference;
    case ScenarioKind::kRing: return ring;
    case ScenarioKind::kBragg: return bragg;
    default: return none;
  }
}

ScenarioOutput run_sweep_scenario(const json& params, const RunContext& ctx) {
  ParamReader r(params, ctx.prefix);
  const std::string scenario_name = r.string("scenario");
  const auto kind = parse_kind(scenario_name);
  if (!kind || sweepable_parameters(*kind).empty()) {
    throw ConfigError("scenario", "must be one of protocol, interference, ring, bragg");
  }
  const std::string parameter = r.string("parameter");
  const auto& allowed = sweepable_parameters(*kind);
  if (std::find(allowed.begin(), allowed.end(), parameter) == allowed.end()) {
    throw ConfigError("parameter", "'" + parameter + "' is not a scalar parameter of '" +
                                       scenario_name + "'");
  }
  auto values = r.numbers("values");
  if (values.empty()) throw ConfigError("values", "must not be empty");
  const json base = r.has("base") ? r.object("base") : json::object();
  const bool parallel = r.boolean("parallel", true);
  r.finish();

  std::stable_sort(values.begin(), values.end());
  const RunContext inner{ctx.prefix + ".base", false};
  auto outs = parallel_map<ScenarioOutput>(
      values.size(),
      [&](std::size_t i) {
        json p = base;
        p[parameter] = values[i];
        return run_kind(*kind, p, inner);
      },
      parallel && ctx.allow_parallel);

  ScenarioOutput out;
  out.parameters = {{"scenario", scenario_name}, {"parameter", parameter},
                    {"values", numbers_json(values)}, {"base", base}, {"parallel", parallel}};

  ResultTable table;
  table.columns.push_back(parameter);
  for (const auto& [name, value] : outs.front().metrics) table.columns.push_back(name);
  for (std::size_t i = 0; i < outs.size(); ++i) {
    std::vector<double> row{values[i]};
    for (const auto& [name, value] : outs[i].metrics) row.push_back(value);
    table.add_row(std::move(row));
    out.integrity.merge(outs[i].integrity);
    for (const auto& f : outs[i].failures) {
      out.failures.push_back(parameter + "=" + format_number(values[i]) + ": " + f);
    }
  }
  table.sort_by(0);

  out.results["scenario"] = scenario_name;
  out.results["parameter"] = parameter;
  out.results["rows"] = table.rows.size();
  out.metrics.emplace_back("rows", static_cast<double>(table.rows.size()));
  if (table.columns.size() > 1) {
    out.plots.push_back({"sweep.svg",
                         {"Sweep of " + parameter, parameter, table.columns[1], table.column(0),
                          {{table.columns[1], table.column(1)}}}});
  }
  out.tables.push_back({"sweep.csv", std::move(table)});
  return out;
}

ScenarioOutput run_selftest_scenario(const json& params, const RunContext& ctx) {
  ParamReader r(params, ctx.prefix);
  const std::string fault_name = r.string("inject_fault", "none");
  r.finish();
  InjectedFault fault = InjectedFault::kNone;
  if (fault_name == "non_hermitian") {
    fault = InjectedFault::kNonHermitian;
  } else if (fault_name != "none") {
    throw ConfigError("inject_fault", "must be \"none\" or \"non_hermitian\"");
  }

  const auto report = run_selftest(fault);
  ScenarioOutput out;
  out.parameters = {{"inject_fault", fault_name}};
  out.integrity.max_norm_drift = report.max_norm_drift;
  out.integrity.max_hermiticity_residual = report.max_hermiticity_residual;

  ResultTable table;
  table.columns = {"check", "passed", "measured", "limit"};
  json checks = json::array();
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    table.add_row({static_cast<double>(i), c.passed ? 1.0 : 0.0, c.measured, c.limit});
    checks.push_back({{"name", c.name},
                      {"measured", json_number(c.measured)},
                      {"limit", json_number(c.limit)},
                      {"passed", c.passed}});
    if (!c.passed) {
      out.failures.push_back("selftest check '" + c.name + "' failed: " +
                             format_number(c.measured) + " > " + format_number(c.limit));
    }
  }
  out.results["checks"] = checks;
  out.results["all_passed"] = report.all_passed();
  out.metrics.emplace_back("checks_failed", static_cast<double>(out.failures.size()));
  out.tables.push_back({"selftest.csv", std::move(table)});
  return out;
}

ScenarioOutput run_kind(ScenarioKind kind, const json& params, const RunContext& ctx) {
  switch (kind) {
    case ScenarioKind::kProtocol: return run_protocol_scenario(params, ctx);
    case ScenarioKind::kInterference: return run_interference_scenario(params, ctx);
    case ScenarioKind::kRing: return run_ring_scenario(params, ctx);
    case ScenarioKind::kBragg: return run_bragg_scenario(params, ctx);
    case ScenarioKind::kSweep: return run_sweep_scenario(params, ctx);
    case ScenarioKind::kSelftest: return run_selftest_scenario(params, ctx);
  }
  throw ConfigError("kind", "unknown scenario kind");
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream o;
  o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return o.str();
}

}  // namespace

int run_scenario(ScenarioKind kind, const RunOptions& options, std::ostream& log,
                 std::ostream& err) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_timestamp();
  try {
    ScenarioConfig config;
    if (options.config_path) {
      config = load_config(*options.config_path, kind);
    } else if (kind == ScenarioKind::kSelftest) {
      config.kind = kind;
      config.source = {{"schema_version", kSchemaVersion}, {"kind", "selftest"}};
    } else {
      throw ConfigError("--config", "required for the '" + to_string(kind) + "' subcommand");
    }
    const fs::path out_dir = options.out_dir.value_or(config.output_dir);
    const bool emit_plots = options.emit_plots || config.emit_plots;

    ScenarioOutput out = run_kind(kind, config.parameters);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json provenance = {{"artifact_version", kArtifactVersion},
                             {"config", config.source},
                             {"started_utc", started},
                             {"wall_clock_seconds", wall}};

    fs::create_directories(out_dir);
    json table_names = json::array();
    for (auto& t : out.tables) {
      t.table.provenance = provenance;
      write_text_file((out_dir / t.file).string(), t.table.to_csv());
      table_names.push_back(t.file);
    }
    if (emit_plots) {
      for (const auto& p : out.plots) write_text_file((out_dir / p.file).string(), render_svg(p.plot));
    }
    const json summary = {
        {"scenario", to_string(kind)},
        {"parameters", out.parameters},
        {"results", out.results},
        {"integrity",
         {{"max_norm_drift", json_number(out.integrity.max_norm_drift)},
          {"max_hermiticity_residual", json_number(out.integrity.max_hermiticity_residual)}}},
        {"tables", table_names},
        {"provenance", provenance}};
    write_text_file((out_dir / "summary.json").string(), summary.dump(2) + "\n");
    log << to_string(kind) << ": wrote " << table_names.size() << " table(s) and summary.json to "
        << out_dir.string() << "\n";

    if (!out.integrity.ok()) {
      err << "integrity failure: max_norm_drift=" << format_number(out.integrity.max_norm_drift)
          << " (limit " << format_number(kNormDriftTolerance)
          << "), max_hermiticity_residual=" << format_number(out.integrity.max_hermiticity_residual)
          << " (limit " << format_number(kHermiticityTolerance) << ")\n";
      return kExitIntegrity;
    }
    if (!out.failures.empty()) {
      for (const auto& f : out.failures) err << "integrity failure: " << f << "\n";
      return kExitIntegrity;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const IntegrityError& e) {
    err << "integrity failure: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace ojj::cli
