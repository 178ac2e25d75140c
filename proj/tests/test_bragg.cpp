#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ojj/bragg.hpp"
#include "ojj/errors.hpp"
#include "ojj/interference.hpp"

using namespace ojj;
using std::numbers::pi;

namespace {

// Omega = Omega' = w on the Bragg resonance with delta_1 = ratio * w.
BraggLadderParams resonant(double ratio, double w = 1.0, double omega_k = 1.0) {
  BraggLadderParams p;
  p.omega_pump = p.omega_probe = w;
  p.omega_k = omega_k;
  p.nu = 4.0 * omega_k;
  p.detuning = ratio * w - omega_k;
  return p;
}

double max_population_gap(const BraggLadderParams& p, const std::vector<double>& grid) {
  const auto full = first_order_dynamics(p, grid);
  const auto reduced = reduced_two_level_dynamics(p, grid);
  double gap = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    gap = std::max(gap, std::abs(std::norm(full[k].g0) - std::norm(reduced[k].g0)));
    gap = std::max(gap, std::abs(std::norm(full[k].g2k) - std::norm(reduced[k].g2k)));
  }
  return gap;
}

}  // namespace

TEST_CASE("detunings") {
  auto p = resonant(20.0);
  CHECK(p.delta_1() == doctest::Approx(20.0));
  CHECK(resonance_detuning(p) == 0.0);
  CHECK(p.adiabatic());
  p.nu = 0.0;
  CHECK(resonance_detuning(p) == doctest::Approx(4.0 * p.omega_k));
  for (double nu : {-3.0, 0.5, 7.25}) {
    p.nu = nu;
    CHECK(p.delta_1() - p.delta_2() == doctest::Approx(p.omega_2k() - nu));
    CHECK(resonance_detuning(p) == doctest::Approx(p.delta_1() - p.delta_2()));
  }
  CHECK_FALSE(resonant(5.0).adiabatic());
}

TEST_CASE("effective M-th order coupling") {
  BraggLadderParams p;
  p.omega_pump = 0.3;
  p.omega_probe = 0.7;
  p.detuning = -12.0;
  p.omega_k = 2.0;
  p.order = 1;
  CHECK(effective_gamma(p) == 0.3 * 0.7 / 12.0);

  BraggLadderParams q;
  q.omega_pump = q.omega_probe = 1.0;
  q.detuning = 10.0;
  q.omega_k = 1.25;  // omega_2k = 5
  q.order = 2;
  CHECK(effective_gamma(q) == doctest::Approx(0.002).epsilon(1e-12));

  SUBCASE("ratio gamma_{M+1}/gamma_M = (W W'/|Delta|)/(M^2 omega_2k)") {
    for (int m = 1; m < 12; ++m) {
      q.order = m;
      const double g_m = effective_gamma(q);
      q.order = m + 1;
      const double g_next = effective_gamma(q);
      CHECK(g_next / g_m == doctest::Approx(0.1 / (m * m * 5.0)).epsilon(1e-10));
      CHECK(g_next < g_m);
    }
  }
  SUBCASE("large orders stay finite") {
    q.order = 200;
    CHECK(std::isfinite(effective_gamma(q)));
  }
  q.detuning = 0.0;
  CHECK_THROWS_AS(effective_gamma(q), PreconditionError);
}

TEST_CASE("three-level ladder") {
  SUBCASE("t = 0 starts in g0") {
    const auto out = first_order_dynamics(resonant(20.0), {0.0});
    CHECK(out[0].g0 == Complex(1.0, 0.0));
    CHECK(std::abs(out[0].g2k) == 0.0);
  }
  SUBCASE("probe off: detuned two-level Rabi between g0 and e_k") {
    auto p = resonant(6.0, 1.5);
    p.omega_probe = 0.0;
    const double w = p.omega_pump, d1 = p.delta_1();
    const double split = std::sqrt(d1 * d1 + 4.0 * w * w);
    const double peak = w * w / (w * w + d1 * d1 / 4.0);
    const auto grid = linspace(0.0, 4.0 * pi / split, 81);
    const auto out = first_order_dynamics(p, grid);
    double observed_max = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double expected = peak * std::pow(std::sin(0.5 * split * grid[k]), 2);
      CHECK(std::abs(std::norm(out[k].ek) - expected) < 1e-8);
      observed_max = std::max(observed_max, std::norm(out[k].ek));
    }
    CHECK(observed_max == doctest::Approx(peak).epsilon(1e-8));  // t = pi/split is on the grid
  }
  SUBCASE("norm drift below 1e-9 over ten transfer periods") {
    const auto p = resonant(20.0);
    const auto grid = linspace(0.0, 10.0 * 2.0 * transfer_time(p), 50);
    for (const auto& a : first_order_dynamics(p, grid)) CHECK(std::abs(a.norm_squared() - 1.0) < 1e-9);
  }
  SUBCASE("forward then backward returns the start") {
    const auto p = resonant(20.0);
    const double t = 1.7 * transfer_time(p);
    const auto forward = integrate_first_order(p, AmplitudeTriple{}, 0.0, t);
    const auto back = integrate_first_order(p, forward, t, 0.0);
    CHECK(std::abs(back.g0 - 1.0) < 1e-8);
    CHECK(std::abs(back.ek) < 1e-8);
    CHECK(std::abs(back.g2k) < 1e-8);
  }
  SUBCASE("non-increasing grids are rejected") {
    CHECK_THROWS_AS(first_order_dynamics(resonant(20.0), {1.0, 0.5}), PreconditionError);
  }
}

TEST_CASE("reduced two-level model") {
  SUBCASE("resonant transfer sin^2(W W' t / delta_1)") {
    const auto p = resonant(20.0, 0.8);
    const auto grid = linspace(0.0, 3.0 * transfer_time(p), 120);
    const auto out = reduced_two_level_dynamics(p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double expected = std::pow(std::sin(0.64 * grid[k] / p.delta_1()), 2);
      CHECK(std::abs(std::norm(out[k].g2k) - expected) < 1e-6);
    }
  }
  SUBCASE("probe off: light shift e^{+i W^2 t / delta_1}, no transfer") {
    auto p = resonant(20.0);
    p.omega_probe = 0.0;
    const auto grid = linspace(0.0, 50.0, 26);
    const auto out = reduced_two_level_dynamics(p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::abs(out[k].g0 - std::polar(1.0, grid[k] / p.delta_1())) < 1e-8);
      CHECK(std::abs(out[k].g2k) == 0.0);
    }
  }
  SUBCASE("t = 0") {
    const auto out = reduced_two_level_dynamics(resonant(20.0), {0.0});
    CHECK(out[0].g0 == Complex(1.0, 0.0));
  }
  SUBCASE("delta_1 = 0 is rejected") {
    auto p = resonant(20.0);
    p.detuning = -p.omega_k;
    CHECK_THROWS_AS(reduced_two_level_dynamics(p, {1.0}), PreconditionError);
  }
}

TEST_CASE("full ladder against the reduced model") {
  const auto p20 = resonant(20.0);
  const auto grid20 = linspace(0.0, 2.0 * transfer_time(p20), 400);
  CHECK(max_population_gap(p20, grid20) <= 0.05);

  const auto p10 = resonant(10.0);
  const auto p40 = resonant(40.0);
  const double gap10 = max_population_gap(p10, linspace(0.0, 2.0 * transfer_time(p10), 400));
  const double gap40 = max_population_gap(p40, linspace(0.0, 2.0 * transfer_time(p40), 400));
  CHECK(gap40 < gap10);
}

TEST_CASE("nu scan peaks on the Bragg resonance") {
  const auto p = resonant(20.0);
  const double t = transfer_time(p);
  std::vector<double> nus;
  const double step = 0.005;
  for (int k = -20; k <= 20; ++k) nus.push_back(4.0 * p.omega_k + k * step);
  const auto serial = bragg_scan(p, BraggScanVariable::kNu, nus, t, false);
  const auto parallel = bragg_scan(p, BraggScanVariable::kNu, nus, t, true);
  std::size_t best = 0;
  for (std::size_t k = 0; k < serial.size(); ++k) {
    if (serial[k].transfer_probability > serial[best].transfer_probability) best = k;
    CHECK(serial[k].transfer_probability == parallel[k].transfer_probability);
    CHECK(serial[k].norm_drift < 1e-9);
  }
  CHECK(std::abs(serial[best].value - 4.0 * p.omega_k) <= step);
  CHECK(serial[best].transfer_probability > 0.95);
}
