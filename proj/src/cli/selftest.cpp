#include "ojj/cli/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "ojj/bragg.hpp"
#include "ojj/cli/scenario.hpp"
#include "ojj/fock.hpp"
#include "ojj/interference.hpp"
#include "ojj/protocol.hpp"
#include "ojj/ring.hpp"

namespace ojj::cli {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

ComplexMatrix random_hermitian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = Complex(normal(rng), normal(rng));
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  for (int r = 0; r < dim; ++r) h(r, r) = h(r, r).real();
  return h;
}

ComplexVector random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

class Suite {
 public:
  void check(const std::string& name, double limit, const std::function<double()>& measure) {
    const auto t0 = std::chrono::steady_clock::now();
    SelftestCheck c;
    c.name = name;
    c.limit = limit;
    c.measured = measure();
    c.passed = c.measured <= limit;  // NaN fails
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.checks.push_back(c);
  }

  void norm_drift(double d) { report.max_norm_drift = std::max(report.max_norm_drift, d); }
  void hermiticity(double r) {
    report.max_hermiticity_residual = std::max(report.max_hermiticity_residual, r);
  }

  SelftestReport report;
};

}  // namespace

bool SelftestReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

SelftestReport run_selftest(InjectedFault fault) {
  Suite s;
  std::mt19937_64 rng(20240611);

  s.check("su2_commutators", 1e-12, [] {
    double worst = 0.0;
    for (int n : {1, 2, 5, 16, 33, 64}) {
      const auto j = build_angular_ops(n);
      const double scale = std::max(1.0, n / 2.0);
      worst = std::max({worst, max_abs(j.jx * j.jy - j.jy * j.jx - kI * j.jz) / scale,
                        max_abs(j.jy * j.jz - j.jz * j.jy - kI * j.jx) / scale,
                        max_abs(j.jz * j.jx - j.jx * j.jz - kI * j.jy) / scale});
    }
    return worst;
  });

  s.check("casimir", 1e-12, [] {
    double worst = 0.0;
    for (int n : {1, 2, 5, 16, 33, 64}) {
      const auto j = build_angular_ops(n);
      const double jj = n / 2.0;
      const ComplexMatrix c = j.jx * j.jx + j.jy * j.jy + j.jz * j.jz -
                              jj * (jj + 1.0) * ComplexMatrix::Identity(n + 1, n + 1);
      worst = std::max(worst, max_abs(c) / (jj * (jj + 1.0)));
    }
    return worst;
  });

  s.check("hamiltonian_hermiticity", HermitianOperator::kTolerance, [&] {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const TwoModeParams p{.total_atoms = 2 + trial * 3, .kappa = u(rng), .g = u(rng),
                            .theta = 3.0 * u(rng), .e0 = u(rng)};
      ComplexMatrix m = build_two_mode_hamiltonian(p).matrix();
      if (fault == InjectedFault::kNonHermitian && trial == 0) m(0, 1) += Complex(1e-3, 0.0);
      const HermitianOperator h(m);  // throws IntegrityError on a corrupted matrix
      worst = std::max(worst, h.residual());
    }
    s.hermiticity(worst);
    return worst;
  });

  s.check("unitarity", 1e-12, [&] {
    double worst = 0.0;
    for (int dim : {2, 9, 33, 65}) {
      const HermitianOperator h(random_hermitian(rng, dim));
      const Propagator u(h);
      const auto psi = random_state(rng, dim);
      for (double t : {0.1, 1.0, 10.0, 100.0}) {
        worst = std::max(worst, std::abs(u.apply(psi, t).norm() - 1.0));
      }
    }
    s.norm_drift(worst);
    return worst;
  });

  s.check("time_reversal", 1e-10, [&] {
    double worst = 0.0;
    for (int dim : {2, 9, 33, 65}) {
      const HermitianOperator h(random_hermitian(rng, dim));
      const Propagator u(h);
      const auto psi = random_state(rng, dim);
      for (double t : {0.5, 5.0, 50.0}) {
        worst = std::max(worst, (u.apply(u.apply(psi, t), -t) - psi).cwiseAbs().maxCoeff());
      }
    }
    return worst;
  });

  s.check("energy_conservation", 1e-10, [&] {
    double worst = 0.0;
    for (int n : {4, 16, 40}) {
      const auto h = build_two_mode_hamiltonian({.total_atoms = n, .kappa = 0.3, .g = 1.0, .theta = 0.7});
      const auto psi = random_state(rng, n + 1);
      const double e0 = expectation(psi, h);
      const Propagator u(h);
      for (double t : {0.3, 3.0, 30.0}) {
        worst = std::max(worst, std::abs(expectation(u.apply(psi, t), h) - e0) /
                                    std::max(1.0, std::abs(e0)));
      }
    }
    return worst;
  });

  s.check("delta_n_law", 1e-8, [] {
    double worst = 0.0;
    for (int n : {2, 4, 8, 16, 32}) {
      for (double phi : linspace(0.0, kPi, 50)) {
        const auto res = run_protocol(n, single_pulse(phi));
        worst = std::max(worst, std::abs(res.delta_n_simulated - exact_delta_n_closed_form(n, phi)));
      }
    }
    return worst;
  });

  s.check("c_coefficient_normalization", 1e-10, [] {
    double worst = 0.0;
    for (int n = 2; n <= 64; n += 2) worst = std::max(worst, std::abs(c_coefficients(n).squaredNorm() - 1.0));
    return worst;
  });

  s.check("mode_basis_involution", 1e-10, [] {
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
      const RealMatrix b = beam_splitter_matrix(n);
      worst = std::max(worst, (b * b - RealMatrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  s.check("d_coefficient_moduli", 1e-8, [] {
    double worst = 0.0;
    for (int n : {4, 8, 12}) {
      for (double phi : {0.3, kPi / 4.0, 1.1, kPi / 2.0, 2.5}) {
        worst = std::max(worst, d_coefficients(n, phi).max_modulus_mismatch);
      }
    }
    return worst;
  });

  s.check("interference_reality", 1e-10, [] {
    double worst = 0.0;
    for (int n : {4, 8, 16}) {
      const FockStateVector state(n, d_coefficients(n, kPi / 4.0).trusted_amplitudes());
      worst = std::max(worst, intensity_trace(state, 1.0, default_tau_grid(1.0, 400)).max_imaginary_residue);
    }
    return worst;
  });

  s.check("interference_closed_form", 1e-10, [] {
    const int n = 8;
    const auto amps = d_coefficients(n, kPi / 4.0).trusted_amplitudes();
    const auto grid = linspace(0.0, 1.2 * kPi, 200);
    const auto trace = intensity_trace(FockStateVector(n, amps), 1.0, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      worst = std::max(worst, std::abs(intensity_closed_form(amps, n, 1.0, grid[k]) - trace.intensity[k]));
    }
    return worst;
  });

  s.check("interference_antiperiodicity", 1e-8, [] {
    const int n = 16;
    const double kappa = 0.7;
    const FockStateVector state(n, d_coefficients(n, kPi / 4.0).trusted_amplitudes());
    const auto grid = linspace(0.0, kPi / kappa, 300);
    std::vector<double> shifted;
    for (double t : grid) shifted.push_back(t + kPi / kappa);
    const auto a = intensity_trace(state, kappa, grid);
    const auto b = intensity_trace(state, kappa, shifted);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      worst = std::max(worst, std::abs(a.intensity[k] + b.intensity[k]));
    }
    return worst;
  });

  s.check("ring_number_conservation", 1e-10, [&] {
    RingCouplingModel m;
    m.gamma_prime_1 = 0.05;
    m.gamma_prime_2 = 0.07;
    m.omega_k1 = 1.0;
    m.omega_k2 = 1.3;
    m.theta = 0.4;
    m.n_particles = 3;
    m.kappa = 0.01;
    s.hermiticity(build_ring_hamiltonian(m).residual());
    const auto trace = ring_population_trace(m, linspace(0.0, 500.0, 200));
    s.norm_drift(trace.max_norm_drift);
    return std::max(trace.max_number_drift, trace.max_norm_drift);
  });

  s.check("ring_theta_independence", 1e-10, [] {
    RingCouplingModel m;
    m.gamma_prime_1 = m.gamma_prime_2 = 0.05;
    m.omega_k1 = m.omega_k2 = 1.0;
    const auto times = linspace(0.0, 800.0, 200);
    const auto a = ring_population_trace(m, times);
    m.theta = kPi / 3.0;
    const auto b = ring_population_trace(m, times);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (int j = 0; j < 4; ++j) {
        worst = std::max(worst, std::abs(a.occupation[k][j] - b.occupation[k][j]));
      }
    }
    return worst;
  });

  s.check("ode_norm_conservation", 1e-9, [&] {
    BraggLadderParams p{.omega_pump = 1.0, .omega_probe = 1.0, .detuning = 20.0, .nu = 4.0, .omega_k = 1.0};
    const auto grid = linspace(0.0, 10.0 * 2.0 * transfer_time(p), 101);
    double worst = 0.0;
    for (const auto& a : first_order_dynamics(p, grid)) worst = std::max(worst, std::abs(a.norm_squared() - 1.0));
    s.norm_drift(worst);
    return worst;
  });

  s.check("ode_reversibility", 1e-8, [] {
    BraggLadderParams p{.omega_pump = 1.0, .omega_probe = 0.8, .detuning = 15.0, .nu = 4.1, .omega_k = 1.0};
    const double t = 2.0 * transfer_time(p);
    const AmplitudeTriple start{};
    const auto forward = integrate_first_order(p, start, 0.0, t);
    const auto back = integrate_first_order(p, forward, t, 0.0);
    return std::max({std::abs(back.g0 - start.g0), std::abs(back.ek - start.ek),
                     std::abs(back.g2k - start.g2k)});
  });

  s.check("sweep_determinism", 0.0, [] {
    json params = {{"scenario", "protocol"},
                   {"parameter", "N"},
                   {"values", {8, 2, 4}},
                   {"base", {{"phi_count", 9}}}};
    params["parallel"] = false;
    const auto serial = run_sweep_scenario(params).tables.front().table.to_csv();
    params["parallel"] = true;
    const auto parallel = run_sweep_scenario(params).tables.front().table.to_csv();
    return serial == parallel ? 0.0 : 1.0;
  });

  return s.report;
}

}  // namespace ojj::cli
