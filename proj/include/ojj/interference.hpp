#pragma once

// Bragg-readout interference signal after a nonlinear hold, and detection of
// its collapse and revival.

#include <optional>
#include <vector>

#include "ojj/fock.hpp"

namespace ojj {

struct IntensityTrace {
  std::vector<double> tau;
  std::vector<double> intensity;
  double prefactor = 1.0;
  double kappa = 0.0;
  int total_atoms = 0;
  double max_imaginary_residue = 0.0;  // before the prefactor
};

/// Evenly spaced grid of `count` points on [start, stop].
std::vector<double> linspace(double start, double stop, int count);

/// Default hold grid: 2000 points on [0, 1.2 pi / kappa].
std::vector<double> default_tau_grid(double kappa, int count = 2000);

/// Applies exp(-i kappa [n^2 + (N-n)^2] tau / 2) and returns
/// prefactor * <c1^dag c2 + c2^dag c1> on every grid point.
IntensityTrace intensity_trace(const FockStateVector& state, double kappa,
                               const std::vector<double>& tau_grid, double prefactor = 1.0);

/// Both readings of the explicit double sum over adjacent amplitudes.
struct ClosedFormIntensity {
  Complex as_written;        // first + second sum, exactly as stated
  double twice_real_first;   // 2 Re(first sum)
};

ClosedFormIntensity intensity_closed_form_terms(const ComplexVector& amplitudes, int total_atoms,
                                                double kappa, double tau);

/// Real value of the closed-form sum. Throws IntegrityError if its imaginary
/// part or the gap to 2 Re(first sum) exceeds 1e-10 (scaled by max(N, 1)).
double intensity_closed_form(const ComplexVector& amplitudes, int total_atoms, double kappa,
                             double tau);

/// pi / (2 kappa delta_n).
double collapse_time_estimate(double kappa, double delta_n);

struct CollapseReport {
  std::optional<double> t_coll_estimate;
  std::optional<double> t_coll_measured;
  std::optional<double> t_revival_measured;
  double envelope_threshold = 0.0;  // absolute, threshold_fraction * peak
  double envelope_peak = 0.0;
  bool signal_resolved = false;  // false when |I| never rises above round-off
};

/// Piecewise-linear interpolation of |I| through its local maxima (the grid
/// end points are included as knots).
std::vector<double> intensity_envelope(const IntensityTrace& trace);

inline constexpr double kDefaultCollapseFraction = 0.36787944117144233;  // 1/e

/// Collapse: first time the envelope, having been at or above
/// threshold_fraction * peak, drops below it and stays below for one
/// envelope window (mean spacing of the envelope knots).
/// Revival: midpoint of the run of envelope >= 90% of peak nearest pi/kappa,
/// counted only if the envelope dipped below 90% before that run.
/// `delta_n`, when positive, fills in the pi/(2 kappa delta_n) estimate.
CollapseReport detect_collapse_revival(const IntensityTrace& trace,
                                       double threshold_fraction = kDefaultCollapseFraction,
                                       std::optional<double> delta_n = std::nullopt);

}  // namespace ojj
