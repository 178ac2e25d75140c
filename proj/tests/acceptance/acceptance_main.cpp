// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ojj/bragg.hpp"
#include "ojj/cli/result_table.hpp"
#include "ojj/cli/selftest.hpp"
#include "ojj/fock.hpp"
#include "ojj/interference.hpp"
#include "ojj/protocol.hpp"
#include "ojj/ring.hpp"

using namespace ojj;
using ojj::cli::format_number;

namespace {

constexpr double kPi = std::numbers::pi;

struct Clause {
  std::string what;
  double measured;
  double limit;
  bool passed;
  std::string note;
};

Clause at_most(std::string what, double measured, double limit, std::string note = "") {
  return {std::move(what), measured, limit, measured <= limit, std::move(note)};
}

struct Criterion {
  int id;
  std::string title;
  double runtime_limit;  // seconds, <= 0 for none
  std::function<std::vector<Clause>()> body;
};

double exact_law(int n) { return std::sqrt(n * (n + 2.0) / 8.0); }

std::vector<Clause> delta_n_law() {
  double worst_abs = 0.0, worst_ratio = 0.0;
  for (int n : {2, 4, 8, 16, 32}) {
    for (double phi : linspace(0.0, kPi, 50)) {
      const auto res = run_protocol(n, single_pulse(phi));
      worst_abs = std::max(worst_abs,
                           std::abs(res.delta_n_simulated - exact_law(n) * std::abs(std::sin(phi))));
      if (std::abs(std::sin(phi)) > 0.1) {
        const double rel = std::abs(res.delta_n_large_n - res.delta_n_simulated) / res.delta_n_simulated;
        worst_ratio = std::max(worst_ratio, rel * n);  // relative error in units of 1/N
      }
    }
  }
  return {at_most("max |sim - sqrt(N(N+2)/8)|sin phi||", worst_abs, 1e-8),
          at_most("max N * relative gap of N/(2 sqrt2)|sin phi| to sim", worst_ratio, 1.0)};
}

std::vector<Clause> heisenberg_proxy() {
  double worst = 0.0;
  for (int n : {2, 4, 8, 16, 32, 64}) {
    worst = std::max(worst, std::abs(delta_n_slope_at_zero(n) - exact_law(n)));
  }
  const double ratio = delta_n_slope_at_zero(32) / delta_n_slope_at_zero(16);
  const double expected = std::sqrt(32.0 * 34.0) / std::sqrt(16.0 * 18.0);
  return {at_most("max |slope(0) - sqrt(N(N+2)/8)|, N = 2..64", worst, 1e-6),
          at_most("|slope(32)/slope(16) - sqrt(32*34)/sqrt(16*18)|", std::abs(ratio - expected), 1e-6)};
}

std::vector<Clause> coefficient_formulas() {
  double norm_gap = 0.0;
  for (int n = 2; n <= 64; n += 2) norm_gap = std::max(norm_gap, std::abs(c_coefficients(n).squaredNorm() - 1.0));

  double transform_gap = 0.0;
  for (int n = 2; n <= 20; n += 2) {
    const auto pm = trap_to_pm_basis(twin_fock_state(n));
    const auto c = c_coefficients(n);
    ComplexVector expected = ComplexVector::Zero(n + 1);
    for (int m = 0; m <= n / 2; ++m) expected(2 * m) = (m % 2 == 0 ? 1.0 : -1.0) * c(m);
    const Complex overlap = expected.dot(pm.amplitudes());
    const Complex phase = overlap / std::abs(overlap);
    transform_gap = std::max(transform_gap, (pm.amplitudes() - phase * expected).cwiseAbs().maxCoeff());
  }

  double d_gap = 0.0;
  bool all_match = true, fallback_ok = true;
  std::string diagnostic;
  for (int n : {4, 8, 12}) {
    for (double phi : linspace(0.0, kPi, 25)) {
      const auto d = d_coefficients(n, phi);
      d_gap = std::max(d_gap, d.max_modulus_mismatch);
      if (!d.matches_oracle) {
        all_match = false;
        diagnostic = d.diagnostic;
        fallback_ok = fallback_ok && !d.diagnostic.empty() &&
                      (d.trusted_amplitudes() - d.oracle_amplitudes).norm() == 0.0;
      }
    }
  }
  std::vector<Clause> out{
      at_most("max |sum C_m^2 - 1|, even N <= 64", norm_gap, 1e-10),
      at_most("twin Fock transform vs (-1)^m C_m up to a global phase, N <= 20", transform_gap, 1e-10)};
  if (all_match) {
    out.push_back(at_most("D_n moduli vs direct evolution, N in {4, 8, 12}, floor(n/2) limit", d_gap, 1e-8));
  } else {
    out.push_back({"D_n mismatch diagnostic emitted and oracle amplitudes used", fallback_ok ? 0.0 : 1.0,
                   0.0, fallback_ok, diagnostic});
  }
  return out;
}

std::vector<Clause> interference() {
  const int n8 = 8;
  const auto amps = d_coefficients(n8, kPi / 4.0).trusted_amplitudes();
  const auto grid = linspace(0.0, 1.2 * kPi, 200);
  const auto trace = intensity_trace(FockStateVector(n8, amps), 1.0, grid);
  double closed_gap = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    closed_gap = std::max(closed_gap, std::abs(intensity_closed_form(amps, n8, 1.0, grid[k]) - trace.intensity[k]));
  }

  double anti = 0.0;
  for (int n : {2, 8, 16, 32}) {
    for (double phi : {kPi / 4.0, 1.0, kPi / 2.0}) {
      const FockStateVector state(n, d_coefficients(n, phi).trusted_amplitudes());
      for (double kappa : {1.0, 0.37}) {
        const auto g = linspace(0.0, kPi / kappa, 400);
        std::vector<double> shifted;
        for (double t : g) shifted.push_back(t + kPi / kappa);
        const auto a = intensity_trace(state, kappa, g);
        const auto b = intensity_trace(state, kappa, shifted);
        for (std::size_t k = 0; k < g.size(); ++k) anti = std::max(anti, std::abs(a.intensity[k] + b.intensity[k]));
      }
    }
  }

  // Collapse at N = 32, phi = pi/2 on the default grid.
  const int n = 32;
  const double kappa = 1.0;
  const auto state = run_protocol(n, single_pulse(kPi / 2.0)).final_state;
  const double dn = number_statistics(state).delta_n;
  const double estimate = collapse_time_estimate(kappa, dn);
  const auto report = detect_collapse_revival(intensity_trace(state, kappa, default_tau_grid(kappa)),
                                              kDefaultCollapseFraction, dn);
  Clause collapse{"measured t_coll / (pi/(2 kappa dn)) within a factor of 2, N = 32, phi = pi/2",
                  std::numeric_limits<double>::quiet_NaN(), 2.0, false, ""};
  if (report.t_coll_measured) {
    const double ratio = *report.t_coll_measured / estimate;
    collapse.measured = std::max(ratio, 1.0 / ratio);
    collapse.passed = collapse.measured <= 2.0;
  } else {
    collapse.note = std::string("no collapse measured: ") +
                    (report.signal_resolved ? "envelope never fell below 1/e of its peak"
                                            : "I(tau) is zero to round-off (peak |I| = " +
                                                  format_number(report.envelope_peak) +
                                                  "); the phi = pi/2 state has support only on n = N/2 mod 2, "
                                                  "and every interference term couples adjacent n") +
                    "; estimate = " + format_number(estimate);
  }
  return {at_most("closed-form sum vs direct expectation, N = 8, 200 points", closed_gap, 1e-10),
          at_most("max |I(tau + pi/kappa) + I(tau)|, even N", anti, 1e-8), collapse};
}

RingCouplingModel symmetric_model(double eps) {
  RingCouplingModel m;
  m.gamma_prime_1 = m.gamma_prime_2 = eps;
  m.omega_k1 = m.omega_k2 = 1.0;
  return m;
}

double cutoff_change(double eps, int particles) {
  auto narrow = symmetric_model(eps);
  narrow.n_particles = particles;
  auto wide = narrow;
  wide.ring_cutoff = 4;
  const auto times = linspace(0.0, 2.0 * kPi / effective_coupling_g(narrow), 400);
  const auto a = ring_population_trace(narrow, times);
  const auto b = ring_population_trace(wide, times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a.occupation[k][j] - b.occupation[k][j]) / particles);
  }
  return worst;
}

std::vector<Clause> adiabatic() {
  const auto m = symmetric_model(0.02);
  const auto report = validate_adiabatic(m, default_adiabatic_duration(m));

  double occupancy = 0.0;
  for (double eps : {0.01, 0.02, 0.05, 0.1}) {
    const auto r = validate_adiabatic(symmetric_model(eps), default_adiabatic_duration(symmetric_model(eps)));
    occupancy = std::max(occupancy, r.max_ring_population / (10.0 * eps * eps));
  }

  double cutoff = 0.0;
  for (double eps : {0.02, 0.05, 0.1}) {
    cutoff = std::max({cutoff, cutoff_change(eps, 1), cutoff_change(eps, 2)});
  }
  const std::string three = "three particles (outside the single-particle validation): " +
                            format_number(cutoff_change(0.1, 3)) + " at eps = 0.1, " +
                            format_number(cutoff_change(0.02, 3)) + " at eps = 0.02";

  double theta_gap = 0.0;
  const auto times = linspace(0.0, default_adiabatic_duration(m), 800);
  const auto a = ring_population_trace(m, times);
  for (double theta : {kPi / 3.0, 1.0, kPi}) {
    auto rotated = m;
    rotated.theta = theta;
    const auto b = ring_population_trace(rotated, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (int j = 0; j < 4; ++j) theta_gap = std::max(theta_gap, std::abs(a.occupation[k][j] - b.occupation[k][j]));
    }
  }
  return {at_most("|fitted Rabi frequency / g - 1| at eps = 0.02", report.relative_error, 0.05),
          at_most("max ring population / (10 eps^2), eps <= 0.1", occupancy, 1.0),
          at_most("population change, ring cutoff 2 -> 4, eps <= 0.1, n = 1, 2", cutoff, 1e-6, three),
          at_most("population change under theta -> pi/3, 1, pi", theta_gap, 1e-10)};
}

std::vector<Clause> bragg() {
  BraggLadderParams p{.omega_pump = 0.5, .omega_probe = 0.5, .detuning = 9.0, .nu = 4.0, .omega_k = 1.0};
  const double t_transfer = transfer_time(p);
  auto grid = linspace(0.0, 2.0 * t_transfer, 401);
  const auto reduced = reduced_two_level_dynamics(p, grid);
  double analytic = 0.0;
  const double rate = p.omega_pump * p.omega_probe / p.delta_1();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    analytic = std::max(analytic, std::abs(std::norm(reduced[k].g2k) - std::pow(std::sin(rate * grid[k]), 2)));
  }

  BraggLadderParams far{.omega_pump = 1.0, .omega_probe = 1.0, .detuning = 19.0, .nu = 4.0, .omega_k = 1.0};
  grid = linspace(0.0, 2.0 * transfer_time(far), 401);
  const auto full = first_order_dynamics(far, grid);
  const auto red = reduced_two_level_dynamics(far, grid);
  double full_gap = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    full_gap = std::max(full_gap, std::abs(std::norm(full[k].g2k) - std::norm(red[k].g2k)));
  }

  // nu grid deliberately offset so 4 omega_k is not a grid point.
  const double c = far.omega_pump * far.omega_probe / far.delta_1();
  const auto nus = linspace(4.0 - 4.0 * c + 0.013 * c, 4.0 + 4.0 * c + 0.013 * c, 40);
  const double step = nus[1] - nus[0];
  const auto scan = bragg_scan(far, BraggScanVariable::kNu, nus, transfer_time(far), true);
  const auto best = std::max_element(scan.begin(), scan.end(), [](const auto& a, const auto& b) {
    return a.transfer_probability < b.transfer_probability;
  });
  const double offset = std::abs(best->value - 4.0 * far.omega_k) / step;

  double gamma_gap = 0.0;
  for (double w : {0.3, 1.0, 2.5}) {
    for (double w2 : {0.7, 1.0}) {
      for (double delta : {-40.0, 7.0, 20.0, 1e3}) {
        BraggLadderParams q{.omega_pump = w, .omega_probe = w2, .detuning = delta, .nu = 4.0, .omega_k = 1.0};
        const double exact = w * w2 / std::abs(delta);
        gamma_gap = std::max(gamma_gap, std::abs(effective_gamma(q) - exact) / exact);
      }
    }
  }
  return {at_most("reduced model vs sin^2(W W' t / delta_1), resonance, W = W'", analytic, 1e-6),
          at_most("max |P_full - P_reduced|, delta_1 = 20 W", full_gap, 0.05),
          at_most("|argmax_nu P - 4 omega_k| in scan steps", offset, 1.0),
          at_most("relative gap of gamma(M=1) to W W'/|delta|", gamma_gap, 0.0)};
}

std::vector<Clause> integrity_suite() {
  const auto report = cli::run_selftest();
  std::vector<Clause> out;
  for (const auto& c : report.checks) out.push_back({c.name, c.measured, c.limit, c.passed, ""});
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "number-spread law", 5.0, delta_n_law},
      {2, "signal slope scaling", 0.0, heisenberg_proxy},
      {3, "coefficient formulas", 0.0, coefficient_formulas},
      {4, "interference", 10.0, interference},
      {5, "adiabatic elimination", 10.0, adiabatic},
      {6, "Bragg ladder", 10.0, bragg},
      {7, "integrity suite", 60.0, integrity_suite},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Clause> clauses;
    std::string error;
    try {
      clauses = c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = error.empty();
    for (const auto& cl : clauses) ok = ok && cl.passed;
    const bool in_time = c.runtime_limit <= 0.0 || secs < c.runtime_limit;
    ok = ok && in_time;
    if (!ok) ++failed;

    std::printf("%s criterion %d (%s): %.3f s", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs);
    if (c.runtime_limit > 0.0) std::printf(" (limit %.0f s%s)", c.runtime_limit, in_time ? "" : ", exceeded");
    std::printf("\n");
    for (const auto& cl : clauses) {
      std::printf("    [%s] %s: %s (limit %s)\n", cl.passed ? "ok" : "FAILED", cl.what.c_str(),
                  format_number(cl.measured).c_str(), format_number(cl.limit).c_str());
      if (!cl.note.empty()) std::printf("        %s\n", cl.note.c_str());
    }
    if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
