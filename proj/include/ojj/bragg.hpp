#pragma once

// First-order Bragg ladder g0 <-> e_k <-> g2k as single-particle amplitudes,
// its two-level reduction with e_k eliminated, and the M-th order coupling.

#include <vector>

#include "ojj/fock.hpp"

namespace ojj {

struct BraggLadderParams {
  double omega_pump = 0.0;   // Omega
  double omega_probe = 0.0;  // Omega'
  double detuning = 0.0;     // Delta
  double nu = 0.0;           // Bragg-beam frequency difference
  double omega_k = 1.0;      // single-photon recoil frequency
  int order = 1;             // M

  void validate() const;

  double omega_2k() const { return 4.0 * omega_k; }
  double delta_1() const { return detuning + omega_k; }
  double delta_2() const { return detuning + omega_k - omega_2k() + nu; }
  /// delta_1 >= 10 max(Omega, Omega')
  bool adiabatic() const;
};

struct AmplitudeTriple {
  Complex g0{1.0, 0.0};
  Complex ek{0.0, 0.0};
  Complex g2k{0.0, 0.0};

  double norm_squared() const { return std::norm(g0) + std::norm(ek) + std::norm(g2k); }
};

struct GroundPair {
  Complex g0{1.0, 0.0};
  Complex g2k{0.0, 0.0};
};

/// Generator of the three-level ladder, rows/cols (g0, e_k, g2k).
ComplexMatrix first_order_generator(const BraggLadderParams& p);

/// Generator after eliminating e_k: -(1/delta_1)[[W^2, W W'], [W W', W'^2]]
/// plus (delta_1 - delta_2) on g2k.
ComplexMatrix reduced_generator(const BraggLadderParams& p);

inline constexpr double kLadderRelTol = 1e-10;
inline constexpr double kLadderAbsTol = 1e-12;

/// Integrates i da/dt = H3 a from `start` at t_start to t_end (either
/// direction) with an adaptive Runge-Kutta-Fehlberg 7(8) pair.
AmplitudeTriple integrate_first_order(const BraggLadderParams& p, const AmplitudeTriple& start,
                                      double t_start, double t_end);

/// Amplitudes at each time of an increasing grid, from (1, 0, 0) at t = 0.
std::vector<AmplitudeTriple> first_order_dynamics(const BraggLadderParams& p,
                                                  const std::vector<double>& t_grid);

/// Same for the eliminated two-level system, from (1, 0) at t = 0.
/// Throws PreconditionError when delta_1 = 0.
std::vector<GroundPair> reduced_two_level_dynamics(const BraggLadderParams& p,
                                                   const std::vector<double>& t_grid);

/// delta_1 - delta_2 = 4 omega_k - nu; zero on the Bragg resonance.
double resonance_detuning(const BraggLadderParams& p);

/// |(W W'/Delta)^M / ([(M-1)!]^2 omega_2k^{M-1})|, evaluated in log space.
double effective_gamma(const BraggLadderParams& p);

/// Duration of a full two-photon transfer on resonance, pi delta_1 / (2 W W').
double transfer_time(const BraggLadderParams& p);

struct BraggScanPoint {
  double value = 0.0;  // scanned nu or Delta
  double transfer_probability = 0.0;
  double gamma_eff = 0.0;
  double norm_drift = 0.0;
};

enum class BraggScanVariable { kNu, kDetuning };

/// |a_g2k(t)|^2 of the full ladder for each scanned value. Points are
/// independent; `parallel` only changes scheduling, not results.
std::vector<BraggScanPoint> bragg_scan(const BraggLadderParams& base, BraggScanVariable variable,
                                       const std::vector<double>& values, double t,
                                       bool parallel = false);

}  // namespace ojj
