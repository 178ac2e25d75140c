#pragma once

// Twin-Fock phase-measurement protocol: prepare |N/2>|N/2>, apply a strong
// Josephson pulse, read the phase off the trap-1 number spread.

#include <optional>
#include <string>
#include <vector>

#include "ojj/fock.hpp"

namespace ojj {

/// One piecewise-constant stretch of the effective Hamiltonian.
struct PulseSegment {
  double g = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double duration = 0.0;
};

class PulseSchedule {
 public:
  static constexpr int kDefaultRampSteps = 100;

  PulseSchedule() = default;

  PulseSchedule& add(const PulseSegment& segment);

  /// Linear ramp of g from g_start to g_end, resolved as `steps`
  /// constant sub-segments evaluated at their midpoints.
  PulseSchedule& add_linear_ramp(double g_start, double g_end, double theta, double kappa,
                                 double duration, int steps = kDefaultRampSteps);

  const std::vector<PulseSegment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  /// Sum of g * duration over segments whose phase is theta = pi (mod 2 pi).
  double accumulated_phase() const;

  /// True when every segment is a pure coupling pulse (kappa = 0, theta = pi).
  bool is_pure_coupling() const;

 private:
  std::vector<PulseSegment> segments_;
};

/// Single rapid pulse at theta = pi with g * t = phi (kappa = 0 by default).
PulseSchedule single_pulse(double phi, double g = 1.0, double kappa = 0.0);

struct ProtocolResult {
  FockStateVector final_state;
  double phi = 0.0;
  double delta_n_simulated = 0.0;
  double delta_n_large_n = 0.0;  // large-N closed form, N/(2 sqrt 2) |sin phi|
  double delta_n_exact = 0.0;  // rotation oracle
  std::optional<ComplexVector> coefficients_d;  // set for pure coupling pulses
};

ProtocolResult run_protocol(int total_atoms, const PulseSchedule& schedule);

/// N/(2 sqrt 2) |sin phi|.
double analytic_delta_n(int total_atoms, double phi);

/// Trap-1 number spread of exp(-i phi jx)|N/2, N/2>, by direct matrix rotation.
double exact_delta_n_oracle(int total_atoms, double phi);

/// sqrt(N (N+2) / 8) |sin phi|, the value the oracle reproduces.
double exact_delta_n_closed_form(int total_atoms, double phi);

/// d(delta_n)/d(phi) at phi = 0+, from the rotation oracle. delta_n has a
/// |sin phi| kink at zero, so this uses a right-sided difference with one
/// Richardson step rather than a symmetric stencil.
double delta_n_slope_at_zero(int total_atoms, double step = 1e-3);

/// Amplitudes C_m, m = 0..N/2, of the twin Fock state in the
/// symmetric/antisymmetric mode basis (log-factorial evaluation).
RealVector c_coefficients(int total_atoms);

/// Real orthogonal matrix taking trap-basis amplitudes (index n1) to
/// amplitudes over |k>_alpha |N-k>_beta with alpha = (c1+c2)/sqrt2,
/// beta = (c1-c2)/sqrt2. The map is an involution.
RealMatrix beam_splitter_matrix(int total_atoms);

FockStateVector trap_to_pm_basis(const FockStateVector& state);
FockStateVector pm_to_trap_basis(const FockStateVector& state);

/// Closed-form D_n with its oracle check.
///
/// The summation runs p = max(0, n - N/2) .. floor(n/2), the last p with a
/// non-negative power of 2 cos(phi). Any larger upper limit only adds terms
/// with p* > N/2, where the binomial C(N/2, p*) vanishes.
struct DCoefficientResult {
  ComplexVector d;                  // raw D_n, n = 0..N
  ComplexVector amplitudes;         // (-1)^n D_n / (2^{N/2} (N/2)!)
  ComplexVector oracle_amplitudes;  // exp(-i phi jx)|N/2, N/2>
  double max_modulus_mismatch = 0.0;
  // After removing one global phase. The closed form equals the oracle
  // times (-1)^{N/2}.
  double max_amplitude_mismatch = 0.0;
  Complex global_phase{1.0, 0.0};  // oracle ~= global_phase * amplitudes
  bool matches_oracle = false;
  std::string diagnostic;  // empty on a match

  /// Closed form on a match, oracle amplitudes otherwise.
  const ComplexVector& trusted_amplitudes() const {
    return matches_oracle ? amplitudes : oracle_amplitudes;
  }
};

/// Raw closed-form D_n, no oracle check. Terms are accumulated in log space.
ComplexVector d_coefficients_raw(int total_atoms, double phi);

/// Closed form checked against direct evolution under H = jx for time phi.
/// A modulus mismatch beyond `tolerance` is reported in `diagnostic`, never
/// thrown.
DCoefficientResult d_coefficients(int total_atoms, double phi, double tolerance = 1e-8);

}  // namespace ojj
